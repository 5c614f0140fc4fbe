// Copyright 2026 The hypgrp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catch_amalgamated.hpp"

#include <random>
#include <set>

#include "hypgrp/autstruct.hpp"
#include "hypgrp/thinness.hpp"
#include "support.hpp"

using namespace hypgrp;
using namespace testing_support;

namespace {

std::set<std::string> as_strings(const Alphabet& a, const DifferenceSet& d) {
  std::set<std::string> out;
  for (const Word& x : d) out.insert(format_word(a, x));
  return out;
}

RewritingSystem complete(const std::string& name) {
  const Presentation p = group(name);
  return kb_complete(p, structure_kb_limits(p));
}

}  // namespace

TEST_CASE("seed differences", "[autstruct]") {
  for (auto [name, expect] : {std::pair<const char*, std::set<std::string>>{"f2", {"1", "a", "A", "b", "B"}},
                              {"z", {"1", "a", "A"}}}) {
    const RewritingSystem r = complete(name);
    const ReduceFn fn = [&r](const Word& x) { return r.reduce(x); };
    CHECK(as_strings(r.alphabet(), seed_differences(r, fn)) == expect);
  }
}

TEST_CASE("word-difference machine of the integers", "[autstruct]") {
  const RewritingSystem r = complete("z");
  const ReduceFn fn = [&r](const Word& x) { return r.reduce(x); };
  const Presentation& p = r.presentation();
  const DifferenceSet d = seed_differences(r, fn);
  const WdMachine m = build_wd_machine(d, p, fn, {Word{}});
  CHECK(m.size() == 3);
  CHECK(m.alpha[m.fsa.initial()].empty());
  CHECK(m.fsa.run(word_of(p, "aa"), word_of(p, "aa")));
  CHECK_FALSE(m.fsa.run(word_of(p, "aa"), word_of(p, "AA")));
  // every transition moves d to x^-1 d y
  const std::size_t k = p.size();
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.fsa.labels(); ++l)
      if (State t = m.fsa.next(s, l); t != kNoState) {
        const Letter x = label_first(k, l), y = label_second(k, l);
        Word e = x < k ? Word{p.inverse[x]} : Word{};
        e = concat(e, m.alpha[s]);
        if (y < k) e.push_back(y);
        CHECK(fn(e) == m.alpha[t]);
      }
}

TEST_CASE("all-accepting difference machine bounds prefix differences", "[autstruct]") {
  const RewritingSystem r = complete("f2");
  const ReduceFn fn = [&r](const Word& x) { return r.reduce(x); };
  const Presentation& p = r.presentation();
  const DifferenceSet d = seed_differences(r, fn);
  const WdMachine m = build_wd_machine(d, p, fn, d.elements());
  const auto words = all_words(p.size(), 3);
  for (const Word& u : words)
    for (const Word& v : words) {
      bool inside = true;
      const auto labels = padded_pair(p.size(), u, v);
      Word pu, pv;
      for (Label l : labels) {
        if (Letter x = label_first(p.size(), l); x < p.size()) pu.push_back(x);
        if (Letter y = label_second(p.size(), l); y < p.size()) pv.push_back(y);
        inside = inside && d.contains(fn(concat(p.inverse_of(pu), pv)));
      }
      REQUIRE(m.fsa.run(u, v) == inside);
    }
}

TEST_CASE("free group structure", "[autstruct]") {
  const Built& b = built("f2");
  const AutomaticStructure& s = b.s;
  CHECK(as_strings(s.alphabet(), s.dm) == std::set<std::string>{"1", "a", "A", "b", "B"});
  CHECK(s.word_acceptor.size() == 5);
  const auto words = all_words(s.letters(), 5);
  for (Letter x = 0; x < s.letters(); ++x)
    for (const Word& u : words) {
      if (!s.word_acceptor.run(u)) continue;
      const Word target = s.reducer.reduce(concat(u, Word{x}));
      for (const Word& v : words) REQUIRE(s.multipliers[1 + x].run(u, v) == (v == target));
    }
}

TEST_CASE("word-difference machine sizes", "[autstruct]") {
  CHECK(built("g1").s.wd1.size() == 33);
  CHECK(built("g2").s.wd1.size() == 30);
  CHECK(built("g1").s.gamma == 4);
  CHECK(built("g2").s.gamma == 7);
}

TEST_CASE("property: multipliers multiply and project onto W", "[autstruct][property]") {
  std::mt19937_64 rng(3);
  for (const char* name : {"f2", "z_ab", "g1", "g2"}) {
    const AutomaticStructure& s = built(name).s;
    const std::size_t k = s.letters();
    for (Letter x = 0; x < k; ++x) {
      const Fsa& m = s.multipliers[1 + x];
      for (int c : {1, 2}) {
        const Fsa proj = minimize(determinize(project(m, c)));
        REQUIRE(equal_languages(proj, s.word_acceptor));
      }
      for (const auto& labels : detail::random_members(m, 1000 / k, 30, rng)) {
        auto [u, v] = unpad_pair(k, labels);
        REQUIRE(s.reducer.reduce(concat(u, Word{x})) == v);
      }
    }
    // equality multiplier
    for (const auto& labels : detail::random_members(s.multipliers[0], 50, 30, rng)) {
      auto [u, v] = unpad_pair(k, labels);
      REQUIRE(u == v);
    }
  }
}

TEST_CASE("inversion closure flag", "[autstruct]") {
  const RewritingSystem r = complete("g1");
  StructureLimits lim;
  lim.close_under_inverse = true;
  const AutomaticStructure closed = build_structure(r, lim);
  const AutomaticStructure& plain = built("g1").s;
  for (const Word& d : closed.dm) CHECK(closed.dm.contains(closed.reducer.reduce(closed.presentation().inverse_of(d))));
  CHECK(equal_languages(closed.word_acceptor, plain.word_acceptor));
  CHECK(closed.dm.size() >= plain.dm.size());
}
