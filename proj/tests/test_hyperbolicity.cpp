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

#include "hypgrp/hyperbolicity.hpp"
#include "hypgrp/oracle.hpp"
#include "support.hpp"

using namespace hypgrp;
using namespace testing_support;

TEST_CASE("geodesic pairs of the integers", "[hyperbolicity]") {
  const AutomaticStructure& s = built("z").s;
  const GeMachine ge = build_GE(s.wd1, s.word_acceptor);
  const auto words = all_words(2, 5);
  for (const Word& u : words)
    for (const Word& v : words) {
      const bool same_power = u == v && (std::count(u.begin(), u.end(), 0) == 0 || std::count(u.begin(), u.end(), 1) == 0);
      REQUIRE(ge.minimal.run(u, v) == same_power);
    }
}

TEST_CASE("free group geodesics", "[hyperbolicity]") {
  const Built& b = built("f2");
  const GwMachine gw = build_GW(build_GE(b.s.wd1, b.s.word_acceptor).minimal);
  CHECK(gw.minimal.size() == 5);
  CHECK(equal_languages(gw.minimal, b.s.word_acceptor));
  CHECK(b.h.halted);
  CHECK(b.h.papasoglu_vertex == 0);
  CHECK(b.h.vertex_diffs.size() == 1);
}

TEST_CASE("surface group halts at once", "[hyperbolicity]") {
  const HyperbolicityReport& h = built("g1").h;
  REQUIRE(h.halted);
  CHECK(h.n_final == 1);
  REQUIRE(h.rounds.size() == 1);
  CHECK(h.rounds[0].ge_states == 121);
  CHECK(h.rounds[0].ge_minimal == 49);
  CHECK(h.rounds[0].gw_minimal == 49);
  CHECK(h.rounds[0].counterexamples == 0);
  CHECK(h.gamma_prime == 4);
  CHECK(h.papasoglu_vertex <= h.gamma_prime);
}

TEST_CASE("von Dyck group needs a second round", "[hyperbolicity]") {
  const Built& b = built("g2");
  REQUIRE(b.h.halted);
  CHECK(b.h.n_final == 2);
  CHECK(b.h.rounds[0].counterexamples > 0);
  CHECK(b.h.gamma_prime == 7);
  CHECK(b.h.gw_final.size() == 54);

  // round-1 counterexamples are geodesic words outside GW_1
  const GeMachine ge = build_GE(b.s.wd1, b.s.word_acceptor);
  const GwMachine gw = build_GW(ge.minimal);
  const auto cex = find_T_counterexamples(b.s.wd1, gw.minimal, 500);
  REQUIRE_FALSE(cex.empty());
  for (const Word& w : cex) {
    CHECK_FALSE(gw.minimal.run(w));
    CHECK(b.s.reducer.reduce(w).size() == w.size());
  }
}

TEST_CASE("integers have no counterexamples", "[hyperbolicity]") {
  const Built& b = built("z");
  const GeMachine ge = build_GE(b.s.wd1, b.s.word_acceptor);
  CHECK(find_T_counterexamples(b.s.wd1, build_GW(ge.minimal).minimal, 500).empty());
  CHECK(b.h.halted);
  CHECK(b.h.n_final == 1);
}

TEST_CASE("free abelian group is inconclusive", "[hyperbolicity]") {
  const HyperbolicityReport& h = built("z2", 5).h;
  CHECK_FALSE(h.halted);
  CHECK(h.rounds.size() == 5);
  CHECK(h.strict_growth);
  for (std::size_t i = 1; i < h.rounds.size(); ++i) CHECK(h.rounds[i].wd_set > h.rounds[i - 1].wd_set);
}

TEST_CASE("bigons of two equal generators", "[hyperbolicity]") {
  const Built& b = built("z_ab");
  REQUIRE(b.h.halted);
  // ab and ba are distinct geodesics, but their prefixes are equal elements
  const CayleyBall ball(b.s.presentation(), b.reduce(), 6);
  CHECK(geodesics_between(ball, 0, *ball.locate(Word{0, 0})).size() == 4);
  CHECK(max_bigon_width(ball) == 0);
  CHECK(b.h.vertex_diffs.size() == 1);
  CHECK(b.h.papasoglu_vertex == 0);
  CHECK(b.h.papasoglu_vertex <= b.h.papasoglu_midedge + 1);
}
