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

#include <algorithm>
#include <random>
#include <set>

#include "hypgrp/oracle.hpp"
#include "hypgrp/rewriting.hpp"
#include "support.hpp"

using namespace hypgrp;
using namespace testing_support;

namespace {

std::set<std::pair<std::string, std::string>> rule_set(const RewritingSystem& r) {
  std::set<std::pair<std::string, std::string>> out;
  for (const Rule& x : r.rules()) out.emplace(format_word(r.alphabet(), x.lhs), format_word(r.alphabet(), x.rhs));
  return out;
}

RewritingSystem complete(const std::string& name) {
  const Presentation p = group(name);
  return kb_complete(p, structure_kb_limits(p));
}

// Inserts relators, their inverses and cancelling pairs at random places.
Word disguise(const Presentation& p, Word w, std::mt19937& rng, int steps) {
  std::uniform_int_distribution<int> kind(0, 2);
  for (int i = 0; i < steps; ++i) {
    std::uniform_int_distribution<std::size_t> at(0, w.size());
    Word ins;
    const int k = kind(rng);
    if (k < 2 && !p.relators.empty()) {
      ins = p.relators[std::uniform_int_distribution<std::size_t>(0, p.relators.size() - 1)(rng)];
      if (k == 1) ins = p.inverse_of(ins);
    } else {
      const auto x = static_cast<Letter>(std::uniform_int_distribution<std::size_t>(0, p.size() - 1)(rng));
      ins = {x, p.inverse[x]};
    }
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(at(rng)), ins.begin(), ins.end());
  }
  return w;
}

}  // namespace

TEST_CASE("parse the surface group file", "[rewriting]") {
  const Presentation p = group("g1");
  CHECK(p.size() == 8);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].size() == 8);
  CHECK(p.alphabet.names() == std::vector<std::string>{"a", "A", "c", "C", "b", "B", "d", "D"});
  for (Letter x = 0; x < p.size(); ++x) CHECK(p.inverse[p.inverse[x]] == x);
}

TEST_CASE("presentation errors", "[rewriting]") {
  CHECK(group("f2").relators.empty());
  CHECK_THROWS_WITH(parse_presentation("hgp v1\ngenerators: a\ninverses: a=A\nrelator: a b\n"),
                    Catch::Matchers::ContainsSubstring("line 4"));
  CHECK_THROWS_AS(parse_presentation("hgp v1\ngenerators: a b\ninverses: a=A b=A\n"), InputError);
  CHECK_THROWS_AS(parse_presentation("hgp v1\ngenerators: a b\ninverses: a=b b=a\n"), InputError);
  CHECK_THROWS_AS(parse_presentation("hgp v2\n"), InputError);
  CHECK_THROWS_AS(parse_presentation("hgp v1\ngenerators: a\ninverses: a=A\nfoo: 1\n"), InputError);
}

TEST_CASE("word syntax", "[rewriting]") {
  const Presentation p = group("g2");
  CHECK(format_word(p.alphabet, word_of(p, "(ab)^3")) == "ababab");
  CHECK(format_word(p.alphabet, word_of(p, "a^-1 b^-2")) == "ABB");
  CHECK(word_of(p, "1").empty());
}

TEST_CASE("free group completion gives free reduction", "[rewriting]") {
  const RewritingSystem r = complete("f2");
  CHECK(r.confluent());
  CHECK(rule_set(r) == std::set<std::pair<std::string, std::string>>{
                           {"aA", "1"}, {"Aa", "1"}, {"bB", "1"}, {"Bb", "1"}});
  CHECK(r.reduce(word_of(r.presentation(), "abBA")).empty());
}

TEST_CASE("free abelian completion", "[rewriting]") {
  const RewritingSystem r = complete("z2");
  CHECK(r.confluent());
  CHECK(rule_set(r) == std::set<std::pair<std::string, std::string>>{{"aA", "1"}, {"Aa", "1"}, {"bB", "1"},
                                                                     {"Bb", "1"}, {"ba", "ab"}, {"bA", "Ab"},
                                                                     {"Ba", "aB"}, {"BA", "AB"}});
  const Presentation& p = r.presentation();
  CHECK(format_word(p.alphabet, r.reduce(word_of(p, "ba"))) == "ab");
  // normal form is a^m b^n with the exponent sums
  for (const Word& x : all_words(4, 6)) {
    long m = 0, n = 0;
    for (Letter l : x) (l < 2 ? m : n) += l % 2 ? -1 : 1;
    Word nf;
    nf.insert(nf.end(), static_cast<std::size_t>(std::abs(m)), m < 0 ? 1 : 0);
    nf.insert(nf.end(), static_cast<std::size_t>(std::abs(n)), n < 0 ? 3 : 2);
    REQUIRE(r.reduce(x) == nf);
  }
}

TEST_CASE("bounded completion of the von Dyck group", "[rewriting]") {
  const RewritingSystem r = complete("g2");
  CHECK_FALSE(r.confluent());
  CHECK(rule_set(r).count({"A", "a"}) == 1);
  CHECK_THROWS_AS(r.reduce(Word{0, 0}), StateError);
  const Built& b = built("g2");
  const Presentation& p = b.s.presentation();
  CHECK(b.s.reducer.reduce(word_of(p, "aa")).empty());
  CHECK(format_word(p.alphabet, b.s.reducer.reduce(word_of(p, "A"))) == "a");
}

TEST_CASE("word acceptors of trivial controls", "[rewriting]") {
  CHECK(build_word_acceptor(complete("f2")).size() == 5);
  const Fsa z = build_word_acceptor(complete("z"));
  CHECK(z.size() == 3);
  CHECK(z.run(Word{0, 0, 0}));
  CHECK(z.run(Word{1, 1}));
  CHECK_FALSE(z.run(Word{0, 1}));
  CHECK_THROWS_AS(build_word_acceptor(complete("g2")), StateError);
}

TEST_CASE("property: reduction is invariant under inserted relators", "[rewriting][property]") {
  std::mt19937 rng(7);
  for (const char* name : {"f2", "z2", "z_ab", "g1", "g2"}) {
    const Built& b = built(name);
    const Presentation& p = b.s.presentation();
    for (int i = 0; i < 300; ++i) {
      const Word x = random_word(rng, p.size(), 12);
      const Word y = disguise(p, x, rng, 3);
      const Word nf = b.s.reducer.reduce(x);
      INFO(name << " " << format_word(p.alphabet, x) << " ~ " << format_word(p.alphabet, y));
      REQUIRE(b.s.reducer.reduce(y) == nf);
      REQUIRE(b.s.reducer.reduce(nf) == nf);
      REQUIRE_FALSE(shortlex_less(x, nf));
    }
  }
}

TEST_CASE("relators reduce to the identity", "[rewriting]") {
  for (const char* name : {"z2", "z_ab", "g1", "g2", "g3"}) {
    const Built& b = built(name);
    for (const Word& r : b.s.presentation().relators) CHECK(b.s.reducer.reduce(r).empty());
  }
}

TEST_CASE("normal forms of short length match the ball", "[rewriting]") {
  for (auto [name, k] : {std::pair{"g1", std::size_t{4}}, std::pair{"g2", std::size_t{6}}}) {
    const Built& b = built(name);
    const CayleyBall ball(b.s.presentation(), b.reduce(), k);
    std::size_t accepted = 0;
    for (const Word& x : all_words(b.s.letters(), k)) accepted += b.s.word_acceptor.run(x);
    CHECK(accepted == ball.size());
    for (std::uint32_t v = 0; v < ball.size(); ++v) {
      REQUIRE(b.s.word_acceptor.run(ball.element(v)));
      REQUIRE(ball.element(v).size() == ball.length(v));
    }
  }
}
