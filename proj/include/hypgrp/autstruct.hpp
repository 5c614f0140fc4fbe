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

#include "hypgrp/difference.hpp"
#include "hypgrp/errors.hpp"
#include "hypgrp/fsa_ops.hpp"
#include "hypgrp/reducer.hpp"
#include "hypgrp/rewriting.hpp"

namespace hypgrp {

/// Minimal acceptor of the words containing no left-hand side of R as a
/// factor (Aho-Corasick automaton, then minimized).
inline Fsa build_word_acceptor(const RewritingSystem& r) {
  if (!r.confluent()) throw StateError("word acceptor needs a confluent rewriting system");
  const std::size_t k = r.letters();
  std::vector<std::vector<State>> go(1, std::vector<State>(k, kNoState));
  std::vector<char> dead(1, 0);
  for (const Rule& rule : r.rules()) {
    State s = 0;
    for (Letter x : rule.lhs) {
      if (go[s][x] == kNoState) {
        go[s][x] = static_cast<State>(go.size());
        go.emplace_back(k, kNoState);
        dead.push_back(0);
      }
      s = go[s][x];
    }
    dead[s] = 1;
  }
  std::vector<State> fail(go.size(), 0), order;
  for (Letter x = 0; x < k; ++x) {
    if (go[0][x] == kNoState) go[0][x] = 0;
    else order.push_back(go[0][x]);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const State s = order[i];
    dead[s] = dead[s] || dead[fail[s]];
    for (Letter x = 0; x < k; ++x) {
      const State t = go[s][x];
      if (t == kNoState) {
        go[s][x] = go[fail[s]][x];
      } else {
        fail[t] = go[fail[s]][x];
        order.push_back(t);
      }
    }
  }
  Fsa m(r.alphabet(), 1);
  for (std::size_t s = 0; s < go.size(); ++s) m.add_state(!dead[s]);
  m.set_initial(0);
  for (State s = 0; s < go.size(); ++s)
    if (!dead[s])
      for (Letter x = 0; x < k; ++x)
        if (!dead[go[s][x]]) m.set_next(s, x, go[s][x]);
  return minimize(m);
}

/// Acceptor of the words having no factor s with a short-lex smaller u such
/// that (s, u) leads from the identity back to it in the table.
inline Fsa word_acceptor_from_table(const Fsa& table) {
  const std::size_t k = table.letters();
  const auto pad = static_cast<Letter>(k);
  const State id = table.initial();
  enum : State { kEq, kLt, kGt, kEnded };
  constexpr State kStart = 0, kFound = 1;
  auto node = [&](State d, State mode) -> State {
    if (d == id && mode == kEq) return kStart;
    return 2 + d * 4 + mode;
  };
  Nfa nfa(table.alphabet(), 1);
  for (std::size_t i = 0; i < 2 + table.size() * 4; ++i) nfa.add_state(i == kFound);
  nfa.add_initial(kStart);
  for (Letter x = 0; x < k; ++x) {
    nfa.add_edge(kStart, x, kStart);
    nfa.add_edge(kFound, x, kFound);
  }
  auto expand = [&](State from, State d, State mode) {
    for (Letter x = 0; x < k; ++x) {
      if (mode != kEnded)
        for (Letter y = 0; y < k; ++y) {
          const State e = table.next(d, pair_label(k, x, y));
          if (e == kNoState) continue;
          const State m = mode != kEq ? mode : y < x ? kLt : y > x ? kGt : kEq;
          if (e == id && m == kLt) nfa.add_edge(from, x, kFound);
          else if (!(e == id && m == kEq)) nfa.add_edge(from, x, node(e, m));
        }
      const State e = table.next(d, pair_label(k, x, pad));
      if (e == kNoState) continue;
      nfa.add_edge(from, x, e == id ? kFound : node(e, kEnded));
    }
  };
  expand(kStart, id, kEq);
  for (State d = 0; d < table.size(); ++d)
    for (State mode : {kLt, kGt, kEnded}) expand(node(d, mode), d, mode);
  for (State d = 0; d < table.size(); ++d)
    if (d != id) expand(node(d, kEq), d, kEq);

  Fsa det = determinize(nfa);
  // Every subset contains the start state, so the result is complete and
  // complementing acceptance gives the words with no such factor.
  for (State s = 0; s < det.size(); ++s) det.set_accepting(s, !det.accepting(s));
  return minimize(det);
}

/// Product of W (both coordinates) with a difference table; payload[s] is
/// the table state reached. Acceptance is left to multiplier().
struct MultiplierProduct {
  Fsa fsa;
  std::vector<State> diff;
  std::vector<char> complete;  ///< both coordinates at an accept or ended
};

inline MultiplierProduct multiplier_product(const Fsa& w, const Fsa& table) {
  const std::size_t k = w.letters();
  const auto pad = static_cast<Letter>(k);
  const auto ended = static_cast<State>(w.size());
  MultiplierProduct out{Fsa(w.alphabet(), 2), {}, {}};
  if (w.empty()) return out;
  struct Triple {
    State a, b, d;
  };
  std::vector<Triple> order;
  std::unordered_map<std::uint64_t, State> index;
  const std::uint64_t n1 = w.size() + 1;
  auto id_of = [&](Triple t) {
    const std::uint64_t key = (std::uint64_t{t.a} * n1 + t.b) * table.size() + t.d;
    auto [it, fresh] = index.emplace(key, static_cast<State>(order.size()));
    if (fresh) {
      order.push_back(t);
      out.fsa.add_state();
      out.diff.push_back(t.d);
      out.complete.push_back((t.a == ended || w.accepting(t.a)) && (t.b == ended || w.accepting(t.b)));
    }
    return it->second;
  };
  auto advance = [&](State s, Letter x) -> State {
    if (x == pad) return (s == ended || w.accepting(s)) ? ended : kNoState;
    return s == ended ? kNoState : w.next(s, x);
  };
  id_of({w.initial(), w.initial(), table.initial()});
  out.fsa.set_initial(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const Triple cur = order[i];
    for (Label l = 0; l < out.fsa.labels(); ++l) {
      const State a = advance(cur.a, label_first(k, l));
      if (a == kNoState) continue;
      const State b = advance(cur.b, label_second(k, l));
      if (b == kNoState) continue;
      const State d = table.next(cur.d, l);
      if (d == kNoState) continue;
      out.fsa.set_next(static_cast<State>(i), l, id_of({a, b, d}));
    }
  }
  return out;
}

/// Trimmed multiplier accepting pairs whose final difference is table
/// state `target`; each state's payload is its difference index.
inline Fsa multiplier(const MultiplierProduct& p, State target) {
  Fsa m = p.fsa;
  for (State s = 0; s < m.size(); ++s) m.set_accepting(s, p.complete[s] && p.diff[s] == target);
  std::vector<std::size_t> off(m.size() + 1);
  std::vector<State> data(p.diff);
  for (std::size_t s = 0; s < m.size(); ++s) off[s + 1] = s + 1;
  m.set_subsets(std::move(off), std::move(data));
  return trim(m);
}

struct StructureLimits {
  std::size_t max_iterations = 60;
  std::size_t witnesses_per_check = 10;
  bool close_under_inverse = false;  ///< also adjoin d^-1 for every difference d
  DeterminizeOptions determinize;
};

struct StructureStats {
  std::size_t iterations = 0;
  std::size_t working_differences = 0;
};

/// Short-lex automatic structure. multipliers[0] is the equality
/// multiplier, multipliers[1 + x] the one for letter x; their payloads are
/// indices into `working`.
struct AutomaticStructure {
  Reducer reducer;
  Fsa word_acceptor;
  std::vector<Fsa> multipliers;
  DifferenceSet working;
  DifferenceSet dm;
  WdMachine wd1;
  std::size_t gamma = 0;
  StructureStats stats;

  const Presentation& presentation() const { return reducer.presentation(); }
  const Alphabet& alphabet() const { return presentation().alphabet; }
  std::size_t letters() const { return alphabet().size(); }
};

/// Completion bounds used before building a structure: equations longer
/// than the longest relator plus four are set aside. The structure build
/// does not need a confluent system, only enough rules to seed it.
inline KbLimits structure_kb_limits(const Presentation& p) {
  std::size_t longest = 0;
  for (const Word& r : p.relators) longest = std::max(longest, r.size());
  KbLimits l;
  l.max_rule_length = longest + 4;
  l.max_rules = 3000;
  return l;
}

/// Identity plus the successive differences of every rule and the normal
/// form of every letter.
inline DifferenceSet seed_differences(const RewritingSystem& r, const ReduceFn& reduce) {
  const Presentation& p = r.presentation();
  DifferenceSet d;
  for (Letter x = 0; x < p.size(); ++x) d.insert(reduce(Word{x}));
  for (const Rule& rule : r.rules()) add_pair_differences(d, rule.lhs, rule.rhs, p.size(), p.inverse, reduce);
  return d;
}

/// Word-difference machine on D with the given accepting elements.
inline WdMachine build_wd_machine(const DifferenceSet& d, const Presentation& p,
                                  const ReduceFn& reduce, const std::vector<Word>& accepting) {
  const Fsa table = difference_table(d, p.alphabet, p.inverse, reduce);
  std::vector<std::size_t> acc;
  for (const Word& w : accepting)
    if (auto i = d.find(w)) acc.push_back(*i);
  return make_wd_machine(table, d, acc);
}

namespace detail {

inline std::size_t check_projection(const Fsa& w, const Fsa& m, int coordinate, std::size_t cap,
                                    std::vector<Word>& missing) {
  const Fsa proj = minimize(determinize(project(m, coordinate)));
  for (const auto& l : diff_witnesses(w, proj, cap)) missing.emplace_back(l.begin(), l.end());
  return missing.size();
}

}  // namespace detail

/// Builds W and the multipliers from word differences, starting from the
/// rules' differences and adding those of failing pairs until every
/// multiplier projects onto L(W) in both coordinates.
inline AutomaticStructure build_structure(const RewritingSystem& rules,
                                          const StructureLimits& limits = {}) {
  const Presentation& p = rules.presentation();
  const std::size_t k = p.size();
  AutomaticStructure s;
  s.reducer = Reducer(rules);
  const Reducer& red = s.reducer;
  const ReduceFn fn = [&red](const Word& w) { return red.reduce(w); };
  DifferenceSet d = seed_differences(rules, fn);

  Fsa table;
  for (std::size_t iter = 1;; ++iter) {
    if (iter > limits.max_iterations)
      throw ResourceError("automatic structure not found after " + std::to_string(limits.max_iterations) +
                              " rounds with " + std::to_string(d.size()) + " differences",
                          {d.size(), 0, 0});
    s.stats.iterations = iter;
    if (limits.close_under_inverse) {
      const std::vector<Word> now = d.elements();
      for (const Word& e : now) d.insert(red.reduce(p.inverse_of(e)));
    }
    for (;;) {
      table = difference_table(d, p.alphabet, p.inverse, fn);
      s.word_acceptor = word_acceptor_from_table(table);
      s.reducer.attach(s.word_acceptor, table);
      DifferenceSet again;
      for (const Word& e : d) again.insert(red.reduce(e));
      if (again.elements() == d.elements()) break;
      d = std::move(again);
    }
    const Fsa& w = s.word_acceptor;

    std::size_t added = 0;
    for (const Rule& r : rules.rules())
      if (w.run(r.lhs)) added += add_pair_differences(d, r.lhs, red.reduce(r.lhs), k, p.inverse, fn);

    const MultiplierProduct prod = multiplier_product(w, table);
    s.multipliers.assign(1, multiplier(prod, table.initial()));
    for (Letter x = 0; x < k; ++x) {
      const Word target = red.reduce(Word{x});
      const auto idx = d.find(target);
      if (!idx) {
        added += d.insert(target).second;
        s.multipliers.emplace_back(p.alphabet, 2);
        continue;
      }
      s.multipliers.push_back(multiplier(prod, static_cast<State>(*idx)));
      std::vector<Word> left, right;
      detail::check_projection(w, s.multipliers.back(), 1, limits.witnesses_per_check, left);
      detail::check_projection(w, s.multipliers.back(), 2, limits.witnesses_per_check, right);
      for (const Word& u : left) added += add_pair_differences(d, u, red.reduce(concat(u, Word{x})), k, p.inverse, fn);
      for (const Word& v : right)
        added += add_pair_differences(d, red.reduce(concat(v, Word{p.inverse[x]})), v, k, p.inverse, fn);
    }
    if (added == 0) break;
  }

  s.working = d;
  std::vector<char> used(d.size(), 0);
  for (std::size_t i = 1; i < s.multipliers.size(); ++i) {
    const Fsa& m = s.multipliers[i];
    for (State q = 0; q < m.size(); ++q) used[m.subset(q)[0]] = 1;
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    if (used[i]) s.dm.insert(d[i]);
  if (limits.close_under_inverse) {
    const std::vector<Word> now = s.dm.elements();
    for (const Word& e : now) s.dm.insert(red.reduce(p.inverse_of(e)));
  }
  s.wd1 = build_wd_machine(s.dm, p, fn, {Word{}});
  s.gamma = s.dm.max_length();
  s.stats.working_differences = d.size();
  return s;
}

}  // namespace hypgrp
