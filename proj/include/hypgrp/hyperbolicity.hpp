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

#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hypgrp/autstruct.hpp"
#include "hypgrp/difference.hpp"
#include "hypgrp/fsa_ops.hpp"

namespace hypgrp {

/// Equal-length pairs (u, v) accepted by the word-difference machine with v
/// in L(W). `raw` is the accessible product before minimization; its
/// payload holds (difference state, W state).
struct GeMachine {
  Fsa raw;
  Fsa minimal;
};

inline GeMachine build_GE(const WdMachine& wd, const Fsa& w) {
  const std::size_t k = w.letters();
  GeMachine out{Fsa(w.alphabet(), 2), Fsa(w.alphabet(), 2)};
  if (wd.fsa.empty() || w.empty()) return out;
  Fsa& g = out.raw;
  std::vector<std::pair<State, State>> order;
  std::unordered_map<std::uint64_t, State> index;
  auto id_of = [&](State d, State s) {
    auto [it, fresh] = index.emplace((std::uint64_t{d} << 32) | s, static_cast<State>(order.size()));
    if (fresh) {
      order.emplace_back(d, s);
      g.add_state(wd.fsa.accepting(d) && w.accepting(s));
    }
    return it->second;
  };
  id_of(wd.fsa.initial(), w.initial());
  g.set_initial(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [d, s] = order[i];
    for (Letter x = 0; x < k; ++x)
      for (Letter y = 0; y < k; ++y) {
        const State d2 = wd.fsa.next(d, pair_label(k, x, y));
        if (d2 == kNoState) continue;
        const State s2 = w.next(s, y);
        if (s2 == kNoState) continue;
        g.set_next(static_cast<State>(i), pair_label(k, x, y), id_of(d2, s2));
      }
  }
  std::vector<std::size_t> off{0};
  std::vector<State> data;
  for (const auto& [d, s] : order) {
    data.push_back(d);
    data.push_back(s);
    off.push_back(data.size());
  }
  g.set_subsets(std::move(off), std::move(data));
  out.minimal = minimize(g);
  return out;
}

struct GwMachine {
  std::size_t determinized_states = 0;
  Fsa minimal;
};

/// Words u with (u, v) in L(GE) for some v.
inline GwMachine build_GW(const Fsa& ge, const DeterminizeOptions& opt = {}) {
  const Fsa det = determinize(project(ge, 1), opt);
  return {det.size(), minimize(det)};
}

/// Up to cap words w outside L(GW) with some u in L(GW), l(u) = l(w),
/// (w, u) accepted by the difference machine, in breadth-first order.
/// Words whose last letter is the one leaving L(GW) are preferred; longer
/// extensions of earlier words are returned only if there are no others.
inline std::vector<Word> find_T_counterexamples(const WdMachine& wd, const Fsa& gw,
                                                std::size_t cap) {
  std::vector<Word> out, extensions;
  if (wd.fsa.empty() || gw.empty() || cap == 0) return out;
  const std::size_t k = gw.letters();
  const auto dead = static_cast<State>(gw.size());
  struct Node {
    State d, u, w;
    std::uint32_t parent;
    Letter x;
  };
  std::vector<Node> nodes{{wd.fsa.initial(), gw.initial(), gw.initial(), 0, 0}};
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  const std::uint64_t nu = gw.size() + 1;
  auto key = [&](const Node& n) { return (std::uint64_t{n.d} * nu + n.u) * nu + n.w; };
  auto spell = [&](std::uint32_t i, Letter x) {
    Word word{x};
    for (std::uint32_t j = i; j != 0; j = nodes[j].parent) word.push_back(nodes[j].x);
    std::reverse(word.begin(), word.end());
    return word;
  };
  seen.emplace(key(nodes[0]), 0);
  for (std::uint32_t i = 0; i < nodes.size() && out.size() < cap; ++i) {
    for (Letter x = 0; x < k && out.size() < cap; ++x)
      for (Letter y = 0; y < k && out.size() < cap; ++y) {
        const Node n = nodes[i];
        const State d = wd.fsa.next(n.d, pair_label(k, x, y));
        if (d == kNoState) continue;
        const State u = gw.next(n.u, y);
        if (u == kNoState) continue;
        const State w = n.w == dead || gw.next(n.w, x) == kNoState ? dead : gw.next(n.w, x);
        if (wd.fsa.accepting(d) && gw.accepting(u) && (w == dead || !gw.accepting(w))) {
          if (n.w != dead) out.push_back(spell(i, x));
          else if (extensions.size() < cap) extensions.push_back(spell(i, x));
        }
        const Node next{d, u, w, i, x};
        if (seen.emplace(key(next), static_cast<std::uint32_t>(nodes.size())).second) nodes.push_back(next);
      }
  }
  return out.empty() ? extensions : out;
}

struct HyperbolicityLimits {
  std::size_t max_iterations = 20;
  std::size_t cex_cap = 500;
  DeterminizeOptions determinize;
};

struct HyperbolicityRound {
  std::size_t n = 0;
  std::size_t wd_set = 0;
  std::size_t wd_states = 0;
  std::size_t ge_states = 0;
  std::size_t ge_minimal = 0;
  std::size_t gw_states = 0;
  std::size_t gw_minimal = 0;
  std::size_t counterexamples = 0;
};

struct HyperbolicityReport {
  bool halted = false;
  bool strict_growth = true;
  std::size_t n_final = 0;
  std::size_t gamma = 0;
  std::size_t gamma_prime = 0;
  std::size_t gamma_prime_closure = 0;  ///< over differences on accepted GE pairs
  std::size_t papasoglu_vertex = 0;
  std::size_t papasoglu_midedge = 0;
  std::vector<HyperbolicityRound> rounds;
  DifferenceSet wd_final;
  WdMachine wd_machine;
  GeMachine ge_final;
  Fsa gw_final;
  DifferenceSet ge_diffs;
  DifferenceSet vertex_diffs;
  DifferenceSet midedge_diffs;
};

namespace detail {

/// Differences labelling states of the trimmed raw GE product.
inline DifferenceSet ge_differences(const GeMachine& ge, const WdMachine& wd) {
  DifferenceSet out;
  if (ge.raw.empty()) return out;
  const Fsa t = trim(ge.raw);
  for (State s = 0; s < t.size(); ++s) out.insert(wd.alpha[t.subset(s)[0]]);
  return out;
}

/// Breadth-first search over tuples with a successor callback, followed by
/// a backward pass keeping tuples that reach acceptance.
template <class Tuple, class Hash, class Expand, class Accept>
std::vector<Tuple> live_tuples(Tuple start, Hash hash, Expand expand, Accept accept) {
  std::vector<Tuple> order{start};
  std::unordered_map<std::uint64_t, std::uint32_t> index{{hash(start), 0}};
  std::vector<std::vector<std::uint32_t>> preds(1);
  std::vector<char> live(1, 0);
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    const Tuple cur = order[i];
    expand(cur, [&](const Tuple& t) {
      auto [it, fresh] = index.emplace(hash(t), static_cast<std::uint32_t>(order.size()));
      if (fresh) {
        order.push_back(t);
        preds.emplace_back();
        live.push_back(0);
      }
      preds[it->second].push_back(i);
    });
  }
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < order.size(); ++i)
    if (accept(order[i])) {
      live[i] = 1;
      stack.push_back(i);
    }
  while (!stack.empty()) {
    const std::uint32_t t = stack.back();
    stack.pop_back();
    for (std::uint32_t p : preds[t])
      if (!live[p]) {
        live[p] = 1;
        stack.push_back(p);
      }
  }
  std::vector<Tuple> out;
  for (std::uint32_t i = 0; i < order.size(); ++i)
    if (live[i]) out.push_back(order[i]);
  return out;
}

}  // namespace detail

/// Differences u1(i)^-1 u2(i) over geodesic pairs with common endpoints
/// (vertex) and with endpoints one edge apart (midedge), read off the
/// composite of GE, a multiplier and the converse of GE.
inline std::pair<DifferenceSet, DifferenceSet> bigon_closure(const HyperbolicityReport& report,
                                                             const AutomaticStructure& s) {
  const Reducer& red = s.reducer;
  const std::size_t k = s.letters();
  const auto pad = static_cast<Letter>(k);
  const Fsa ge = trim(report.ge_final.raw);
  const auto& alpha = report.wd_machine.alpha;
  auto ge_diff = [&](State g) -> const Word& { return alpha[ge.subset(g)[0]]; };
  const auto end = static_cast<State>(ge.size());

  DifferenceSet vertex, midedge;
  if (ge.empty()) return {vertex, midedge};

  // vertex bigons: (g1, g2) reading (x1, v) and (x2, v)
  {
    using T = std::pair<State, State>;
    auto hash = [](const T& t) { return (std::uint64_t{t.first} << 32) | t.second; };
    auto expand = [&](const T& t, auto&& emit) {
      for (Letter v = 0; v < k; ++v)
        for (Letter x1 = 0; x1 < k; ++x1) {
          const State a = ge.next(t.first, pair_label(k, x1, v));
          if (a == kNoState) continue;
          for (Letter x2 = 0; x2 < k; ++x2) {
            const State b = ge.next(t.second, pair_label(k, x2, v));
            if (b != kNoState) emit(T{a, b});
          }
        }
    };
    auto accept = [&](const T& t) { return ge.accepting(t.first) && ge.accepting(t.second); };
    for (const T& t : detail::live_tuples(T{ge.initial(), ge.initial()}, hash, expand, accept))
      vertex.insert(red.reduce(concat(ge_diff(t.first), red.inverse(ge_diff(t.second)))));
  }

  // midedge bigons: GE state (or ended), multiplier state, GE state
  struct T {
    State g1, m, g2;
  };
  for (Letter x = 0; x < k; ++x) {
    const Fsa& mx = s.multipliers[1 + x];
    if (mx.empty()) continue;
    const std::uint64_t ng = ge.size() + 1;
    auto hash = [&](const T& t) { return (std::uint64_t{t.g1} * ng + t.g2) * mx.size() + t.m; };
    // Reads a letter of v on a GE side; padding means that side has ended.
    auto side = [&](State g, Letter v, auto&& each) {
      if (v == pad) {
        if (g == end || ge.accepting(g)) each(end);
        return;
      }
      if (g == end) return;
      for (Letter u = 0; u < k; ++u)
        if (State t = ge.next(g, pair_label(k, u, v)); t != kNoState) each(t);
    };
    auto expand = [&](const T& t, auto&& emit) {
      for (Label l = 0; l < mx.labels(); ++l) {
        const State m = mx.next(t.m, l);
        if (m == kNoState) continue;
        side(t.g1, label_first(k, l), [&](State a) {
          side(t.g2, label_second(k, l), [&](State b) { emit(T{a, m, b}); });
        });
      }
    };
    auto accept = [&](const T& t) {
      return mx.accepting(t.m) && (t.g1 == end || ge.accepting(t.g1)) &&
             (t.g2 == end || ge.accepting(t.g2));
    };
    for (const T& t : detail::live_tuples(T{ge.initial(), mx.initial(), ge.initial()}, hash, expand, accept)) {
      const Word d1 = t.g1 == end ? Word{} : ge_diff(t.g1);
      const Word d2 = t.g2 == end ? Word{} : ge_diff(t.g2);
      const Word& m = s.working[mx.subset(t.m)[0]];
      midedge.insert(red.reduce(concat(concat(d1, m), red.inverse(d2))));
    }
  }
  return {vertex, midedge};
}

/// The WD_n / GE_n / GW_n / T_n iteration. Halting certifies that the
/// group is hyperbolic and that GW_final accepts exactly the geodesics.
inline HyperbolicityReport verify_hyperbolic(const AutomaticStructure& s,
                                             const HyperbolicityLimits& limits = {}) {
  const Presentation& p = s.presentation();
  const std::size_t k = p.size();
  const Reducer& red = s.reducer;
  const ReduceFn fn = [&red](const Word& w) { return red.reduce(w); };
  HyperbolicityReport r;
  r.gamma = s.gamma;
  DifferenceSet wd = s.dm;
  for (std::size_t n = 1; n <= limits.max_iterations; ++n) {
    HyperbolicityRound round;
    round.n = n;
    round.wd_set = wd.size();
    WdMachine machine = build_wd_machine(wd, p, fn, {Word{}});
    round.wd_states = machine.size();
    GeMachine ge = build_GE(machine, s.word_acceptor);
    round.ge_states = ge.raw.size();
    round.ge_minimal = ge.minimal.size();
    GwMachine gw = build_GW(ge.minimal, limits.determinize);
    round.gw_states = gw.determinized_states;
    round.gw_minimal = gw.minimal.size();
    const auto cex = find_T_counterexamples(machine, gw.minimal, limits.cex_cap);
    round.counterexamples = cex.size();
    r.rounds.push_back(round);
    r.n_final = n;
    r.wd_final = wd;
    r.wd_machine = std::move(machine);
    r.ge_final = std::move(ge);
    r.gw_final = std::move(gw.minimal);
    if (cex.empty()) {
      r.halted = true;
      break;
    }
    std::size_t added = 0;
    for (const Word& w : cex) added += add_pair_differences(wd, w, red.reduce(w), k, p.inverse, fn);
    if (added == 0) r.strict_growth = false;
  }
  r.gamma_prime = r.wd_final.max_length();
  r.ge_diffs = detail::ge_differences(r.ge_final, r.wd_machine);
  r.gamma_prime_closure = r.ge_diffs.max_length();
  if (r.halted) {
    auto [v, m] = bigon_closure(r, s);
    r.vertex_diffs = std::move(v);
    r.midedge_diffs = std::move(m);
    r.papasoglu_vertex = r.vertex_diffs.max_length();
    r.papasoglu_midedge = r.midedge_diffs.max_length();
  }
  return r;
}

}  // namespace hypgrp
