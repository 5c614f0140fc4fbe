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

#include "hypgrp/fsa_ops.hpp"
#include "support.hpp"

using namespace hypgrp;
using namespace testing_support;

namespace {

const Alphabet ab({"a", "b"});
const Alphabet aA({"a", "A"});

// {a^n} u {A^n}
Fsa z_geodesics() {
  return parse_fsa(
      "fsa v1\narity: 1\nalphabet: a A\npadding: _\nstates: 3\ninitial: 1\naccepting: 1 2 3\n"
      "1 a 2\n1 A 3\n2 a 2\n3 A 3\n");
}

Fsa single_word(const Alphabet& a, const Word& w) {
  Fsa m(a, 1);
  m.add_state(w.empty());
  m.set_initial(0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    m.add_state(i + 1 == w.size());
    m.set_next(static_cast<State>(i), w[i], static_cast<State>(i + 1));
  }
  return m;
}

Fsa all_words_fsa(const Alphabet& a) {
  Fsa m(a, 1);
  m.add_state(true);
  m.set_initial(0);
  for (Label l = 0; l < m.labels(); ++l) m.set_next(0, l, 0);
  return m;
}

std::vector<Word> as_words(const std::vector<std::vector<Label>>& v) {
  std::vector<Word> out;
  for (const auto& w : v) out.emplace_back(w.begin(), w.end());
  return out;
}

}  // namespace

TEST_CASE("run on the integer geodesic acceptor", "[fsa]") {
  const Fsa m = z_geodesics();
  CHECK(m.run(Word{0, 0}));
  CHECK_FALSE(m.run(Word{0, 1}));
  CHECK(m.run(Word{}));
  CHECK_THROWS_AS(m.run(Word{7}), InputError);
}

TEST_CASE("determinize two initial states", "[fsa]") {
  Nfa n(ab, 1);
  const State s0 = n.add_state(), s1 = n.add_state(), t0 = n.add_state(true), t1 = n.add_state(true);
  n.add_initial(s0);
  n.add_initial(s1);
  n.add_edge(s0, 0, t0);
  n.add_edge(s1, 1, t1);
  const Fsa d = minimize(determinize(n));
  CHECK(d.size() == 2);
  CHECK(d.run(Word{0}));
  CHECK(d.run(Word{1}));
  CHECK_FALSE(d.run(Word{}));
  CHECK_FALSE(d.run(Word{0, 1}));
}

TEST_CASE("determinize respects the state cap", "[fsa]") {
  // (a|b)*a(a|b)^6 needs 2^7 subsets
  Nfa n(ab, 1);
  for (int i = 0; i < 8; ++i) n.add_state(i == 7);
  n.add_initial(0);
  n.add_edge(0, 0, 0);
  n.add_edge(0, 1, 0);
  n.add_edge(0, 0, 1);
  for (State i = 1; i < 7; ++i) {
    n.add_edge(i, 0, i + 1);
    n.add_edge(i, 1, i + 1);
  }
  CHECK(determinize(n).size() == 128);
  DeterminizeOptions opt;
  opt.max_states = 50;
  try {
    determinize(n, opt);
    FAIL("no cap error");
  } catch (const ResourceError& e) {
    CHECK(e.stats().states > 50);
  }
}

TEST_CASE("epsilon closure in determinize", "[fsa]") {
  Nfa n(ab, 1);
  const State s = n.add_state(), m = n.add_state(), t = n.add_state(true);
  n.add_initial(s);
  n.add_epsilon(s, m);
  n.add_edge(m, 1, t);
  n.add_epsilon(t, s);
  const Fsa d = minimize(determinize(n));
  CHECK(d.run(Word{1, 1, 1}));
  CHECK_FALSE(d.run(Word{0}));
  CHECK_FALSE(d.run(Word{}));
}

TEST_CASE("minimize freely reduced words", "[fsa]") {
  const Alphabet f({"a", "A", "b", "B"});
  // redundant construction: remember the last two letters
  Fsa m(f, 1);
  m.add_state(true);
  m.set_initial(0);
  for (int i = 0; i < 16; ++i) m.add_state(true);
  auto id = [](int prev, int last) { return static_cast<State>(1 + prev * 4 + last); };
  for (Letter x = 0; x < 4; ++x) m.set_next(0, x, id(x, x));
  for (int p = 0; p < 4; ++p)
    for (int l = 0; l < 4; ++l)
      for (Letter x = 0; x < 4; ++x)
        if ((x ^ 1) != l) m.set_next(id(p, l), x, id(l, x));
  const Fsa w = minimize(m);
  CHECK(w.size() == 5);
  CHECK(minimize(w) == w);
  CHECK(w.run(Word{0, 2, 0}));
  CHECK_FALSE(w.run(Word{2, 3}));
}

TEST_CASE("minimize handles empty and dead automata", "[fsa]") {
  Fsa m(ab, 1);
  m.add_state(false);
  m.set_initial(0);
  m.set_next(0, 0, 0);
  CHECK(minimize(m).empty());
  CHECK(trim(m).empty());
  CHECK(diff_witnesses(all_words_fsa(ab), m, 3).size() == 3);
}

TEST_CASE("intersect", "[fsa]") {
  Fsa as(ab, 1);
  as.add_state(true);
  as.set_initial(0);
  as.set_next(0, 0, 0);
  const Fsa r = intersect(all_words_fsa(ab), as);
  CHECK(equal_languages(r, as));
  CHECK(equal_languages(intersect(as, as), as));
  CHECK_THROWS_AS(intersect(as, z_geodesics()), InputError);
}

TEST_CASE("pair_product padding mechanics", "[fsa]") {
  const Fsa eps = single_word(ab, {});
  const Fsa e2 = pair_product(eps, eps);
  CHECK(e2.run(Word{}, Word{}));
  CHECK(e2.size() == 1);
  const Fsa p = pair_product(single_word(ab, {0}), eps);
  CHECK(p.run(Word{0}, Word{}));
  CHECK_FALSE(p.run(Word{0}, Word{0}));
  CHECK_FALSE(p.run(Word{}, Word{}));
}

TEST_CASE("project", "[fsa]") {
  const std::size_t k = ab.size();
  Fsa m(ab, 2);
  m.add_state();
  m.add_state(true);
  m.set_initial(0);
  m.set_next(0, pair_label(k, 0, 1), 1);
  const Fsa p1 = minimize(determinize(project(m, 1)));
  CHECK(p1.run(Word{0}));
  CHECK_FALSE(p1.run(Word{1}));

  // (ab, a$)
  Fsa n(ab, 2);
  n.add_state();
  n.add_state();
  n.add_state(true);
  n.set_initial(0);
  n.set_next(0, pair_label(k, 0, 0), 1);
  n.set_next(1, pair_label(k, 1, k), 2);
  const Fsa p2 = minimize(determinize(project(n, 2)));
  CHECK(p2.run(Word{0}));
  CHECK_FALSE(p2.run(Word{0, 1}));
  CHECK_THROWS_AS(project(p2, 1), InputError);
}

TEST_CASE("reverse_with_subsets on a single word", "[fsa]") {
  const Fsa m = single_word(ab, {0, 1});
  const Fsa r = reverse_with_subsets(m);
  CHECK(r.run(Word{1, 0}));
  CHECK_FALSE(r.run(Word{0, 1}));
  REQUIRE(r.has_subsets());
  const State tau = m.walk(m.initial(), std::vector<Label>{0});
  const State big_t = r.walk(r.initial(), std::vector<Label>{1});
  auto sub = r.subset(big_t);
  CHECK(std::find(sub.begin(), sub.end(), tau) != sub.end());
}

TEST_CASE("diff_witnesses finds bb first", "[fsa]") {
  // words without factor bb
  Fsa nobb(ab, 1);
  nobb.add_state(true);
  nobb.add_state(true);
  nobb.set_initial(0);
  nobb.set_next(0, 0, 0);
  nobb.set_next(0, 1, 1);
  nobb.set_next(1, 0, 0);
  const auto w = diff_witnesses(all_words_fsa(ab), nobb, 4);
  REQUIRE(w.size() == 4);
  CHECK(w[0] == std::vector<Label>{1, 1});
  CHECK(w[1] == std::vector<Label>{0, 1, 1});
  CHECK(w[2] == std::vector<Label>{1, 1, 0});
  CHECK(diff_witnesses(nobb, nobb, 5).empty());
  CHECK(diff_witnesses(nobb, all_words_fsa(ab), 5).empty());
}

TEST_CASE("diff_witnesses on a finite difference", "[fsa]") {
  Fsa m = single_word(ab, {0, 1, 1});
  const auto w = diff_witnesses(m, single_word(ab, {}), 10);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == std::vector<Label>{0, 1, 1});
}

TEST_CASE("compose", "[fsa]") {
  const Alphabet abc({"a", "b", "c"});
  const std::size_t k = 3;
  auto one_pair = [&](Letter x, Letter y) {
    Fsa m(abc, 2);
    m.add_state();
    m.add_state(true);
    m.set_initial(0);
    m.set_next(0, pair_label(k, x, y), 1);
    return m;
  };
  const Fsa c = compose(one_pair(0, 1), one_pair(1, 2));
  CHECK(c.run(Word{0}, Word{2}));
  CHECK_FALSE(c.run(Word{0}, Word{1}));

  // identity relation on all words
  Fsa id(abc, 2);
  id.add_state(true);
  id.set_initial(0);
  for (Letter x = 0; x < k; ++x) id.set_next(0, pair_label(k, x, x), 0);
  // (w, w a) for any w
  Fsa app(abc, 2);
  app.add_state();
  app.add_state(true);
  app.set_initial(0);
  for (Letter x = 0; x < k; ++x) app.set_next(0, pair_label(k, x, x), 0);
  app.set_next(0, pair_label(k, k, 0), 1);
  CHECK(equal_languages(compose(id, app), minimize(app)));
  // appending twice pads the left word by two
  const Fsa twice = compose(app, app);
  CHECK(twice.run(Word{1}, Word{1, 0, 0}));
  CHECK_FALSE(twice.run(Word{1}, Word{1, 0}));
  CHECK(equal_languages(converse(converse(app)), app));
}

TEST_CASE("property: minimize is idempotent and language preserving", "[fsa][property]") {
  std::mt19937 rng(7);
  const Alphabet a3({"x", "y", "z"});
  const auto words = all_words(3, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Fsa m = random_dfa(rng, a3, 1 + trial % 20);
    const Fsa mm = minimize(m);
    CHECK(minimize(mm) == mm);
    for (const auto& w : words) REQUIRE(m.run(w) == mm.run(w));
  }
}

TEST_CASE("property: determinize preserves language", "[fsa][property]") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    // random NFA with a few epsilon moves
    Nfa n(ab, 1);
    const std::size_t sz = 1 + trial % 12;
    std::uniform_int_distribution<State> pick(0, static_cast<State>(sz - 1));
    std::bernoulli_distribution coin(0.3);
    for (std::size_t i = 0; i < sz; ++i) n.add_state(coin(rng));
    n.add_initial(0);
    if (sz > 1) n.add_initial(pick(rng));
    for (State s = 0; s < sz; ++s) {
      for (Label l = 0; l < 2; ++l)
        for (int e = 0; e < 2; ++e)
          if (coin(rng)) n.add_edge(s, l, pick(rng));
      if (coin(rng)) n.add_epsilon(s, pick(rng));
    }
    const Fsa d = determinize(n);
    // brute force over the NFA
    auto nfa_accepts = [&](const Word& w) {
      std::vector<char> cur(sz, 0);
      auto close = [&](std::vector<char>& set) {
        bool grew = true;
        while (grew) {
          grew = false;
          for (State s = 0; s < sz; ++s)
            if (set[s])
              for (State t : n.epsilons(s))
                if (!set[t]) set[t] = grew = true;
        }
      };
      for (State s : n.initial_states()) cur[s] = 1;
      close(cur);
      for (Letter x : w) {
        std::vector<char> nxt(sz, 0);
        for (State s = 0; s < sz; ++s)
          if (cur[s])
            for (const auto& e : n.edges(s))
              if (e.label == x) nxt[e.target] = 1;
        close(nxt);
        cur = std::move(nxt);
      }
      for (State s = 0; s < sz; ++s)
        if (cur[s] && n.is_accepting(s)) return true;
      return false;
    };
    for (int i = 0; i < 1000; ++i) {
      const Word w = random_word(rng, 2, 10);
      REQUIRE(d.run(w) == nfa_accepts(w));
    }
  }
}

TEST_CASE("property: reversal subset property", "[fsa][property]") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Fsa m = random_dfa(rng, ab, 1 + trial % 20);
    const Fsa r = reverse_with_subsets(m);
    for (int i = 0; i < 50; ++i) {
      const Word v = random_word(rng, 2, 8), w = random_word(rng, 2, 8);
      const State tau = m.walk(m.initial(), std::vector<Label>(v.begin(), v.end()));
      const State big_t = r.empty() ? kNoState : r.walk(r.initial(), std::vector<Label>(w.begin(), w.end()));
      bool in = false;
      if (tau != kNoState && big_t != kNoState) {
        auto sub = r.subset(big_t);
        in = std::binary_search(sub.begin(), sub.end(), tau);
      }
      REQUIRE(in == m.run(concat(v, reversed(w))));
    }
  }
}

TEST_CASE("property: projection of pair_product", "[fsa][property]") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Fsa w1 = random_dfa(rng, ab, 1 + trial % 8), w2 = random_dfa(rng, ab, 1 + trial % 5);
    const Fsa p = pair_product(w1, w2);
    if (trim(w1).empty() || trim(w2).empty()) {
      CHECK(p.empty());
      continue;
    }
    CHECK(equal_languages(minimize(determinize(project(p, 1))), minimize(w1)));
    CHECK(equal_languages(minimize(determinize(project(p, 2))), minimize(w2)));
  }
}

TEST_CASE("property: diff_witnesses in strict short-lex order", "[fsa][property]") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Fsa m1 = random_dfa(rng, ab, 2 + trial % 10, 0.8, 0.5);
    const Fsa m2 = random_dfa(rng, ab, 2 + trial % 7, 0.8, 0.5);
    const auto ws = as_words(diff_witnesses(m1, m2, 40));
    for (std::size_t i = 1; i < ws.size(); ++i) REQUIRE(shortlex_less(ws[i - 1], ws[i]));
    // they are exactly the first members of L(m1) \ L(m2)
    std::vector<Word> brute;
    for (const auto& w : all_words(2, 8))
      if (m1.run(w) && !m2.run(w)) brute.push_back(w);
    const std::size_t n = std::min(brute.size(), ws.size());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(ws[i] == brute[i]);
    if (ws.size() < 40) CHECK(ws.size() == brute.size());
  }
}

TEST_CASE("property: two-variable automata only accept padded pairs", "[fsa][property]") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Fsa p = pair_product(random_dfa(rng, ab, 4), random_dfa(rng, ab, 3));
    const Fsa c = compose(p, converse(p));
    for (const Fsa* m : {&p, &c}) {
      for (const auto& w : diff_witnesses(*m, Fsa(ab, 2), 200)) REQUIRE_NOTHROW(unpad_pair(2, w));
    }
  }
}
