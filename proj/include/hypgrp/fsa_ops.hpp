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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypgrp/alphabet.hpp"
#include "hypgrp/automaton.hpp"
#include "hypgrp/errors.hpp"

namespace hypgrp {

struct DeterminizeOptions {
  std::size_t max_states = 0;  ///< 0 = unlimited
  std::size_t max_bytes = 0;   ///< estimated working set; 0 = unlimited
  bool keep_subsets = false;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash_span(std::span<const State> s) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ s.size();
  for (State x : s) h = mix64(h ^ (x + 0x9e3779b97f4a7c15ULL + (h << 6)));
  return h;
}

/// Interns sorted state sets; ids are assigned in insertion order.
class SubsetPool {
 public:
  SubsetPool() { rehash(1024); }

  std::pair<State, bool> intern(std::span<const State> s) {
    const std::uint64_t h = hash_span(s);
    std::size_t i = h & mask_;
    for (;;) {
      const State id = slots_[i];
      if (id == kNoState) break;
      if (hashes_[id] == h) {
        auto other = get(id);
        if (other.size() == s.size() && std::equal(s.begin(), s.end(), other.begin()))
          return {id, false};
      }
      i = (i + 1) & mask_;
    }
    const auto id = static_cast<State>(hashes_.size());
    slots_[i] = id;
    hashes_.push_back(h);
    data_.insert(data_.end(), s.begin(), s.end());
    offsets_.push_back(data_.size());
    if (hashes_.size() * 2 > slots_.size()) rehash(slots_.size() * 2);
    return {id, true};
  }

  std::span<const State> get(State id) const {
    return {data_.data() + offsets_[id], offsets_[id + 1] - offsets_[id]};
  }

  std::size_t size() const noexcept { return hashes_.size(); }

  std::size_t bytes() const noexcept {
    return data_.capacity() * sizeof(State) + offsets_.capacity() * sizeof(std::size_t) +
           slots_.capacity() * sizeof(State) + hashes_.capacity() * sizeof(std::uint64_t);
  }

  std::vector<std::size_t> take_offsets() { return std::move(offsets_); }
  std::vector<State> take_data() { return std::move(data_); }

 private:
  void rehash(std::size_t n) {
    slots_.assign(n, kNoState);
    mask_ = n - 1;
    for (State id = 0; id < hashes_.size(); ++id) {
      std::size_t i = hashes_[id] & mask_;
      while (slots_[i] != kNoState) i = (i + 1) & mask_;
      slots_[i] = id;
    }
  }

  std::vector<State> data_;
  std::vector<std::size_t> offsets_{0};
  std::vector<State> slots_;
  std::vector<std::uint64_t> hashes_;
  std::size_t mask_ = 0;
};

template <class Source>
void epsilon_close(const Source& src, std::vector<State>& set, std::vector<char>& seen) {
  if constexpr (requires { src.epsilons(State{}); }) {
    for (State q : set) seen[q] = 1;
    for (std::size_t i = 0; i < set.size(); ++i)
      for (State t : src.epsilons(set[i]))
        if (!seen[t]) {
          seen[t] = 1;
          set.push_back(t);
        }
    for (State q : set) seen[q] = 0;
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
}

}  // namespace detail

/// Subset construction. Source provides alphabet(), arity(), labels(),
/// size(), initial_states(), is_accepting(q), for_each_transition(q, f) and
/// optionally epsilons(q). States are numbered in breadth-first discovery
/// order with labels explored in alphabet order.
template <class Source>
Fsa determinize(const Source& src, const DeterminizeOptions& opt = {}) {
  Fsa out(src.alphabet(), src.arity());
  detail::SubsetPool pool;
  std::vector<char> seen(src.size(), 0);
  std::vector<State> start(src.initial_states().begin(), src.initial_states().end());
  detail::epsilon_close(src, start, seen);
  if (start.empty()) return out;

  const std::size_t labels = src.labels();
  std::vector<std::vector<State>> bucket(labels);
  std::vector<Label> touched;

  pool.intern(start);
  out.add_state();
  out.set_initial(0);
  for (State id = 0; id < pool.size(); ++id) {
    bool acc = false;
    touched.clear();
    {
      const auto members = pool.get(id);
      for (State q : members) {
        acc = acc || src.is_accepting(q);
        src.for_each_transition(q, [&](Label l, State t) {
          if (bucket[l].empty()) touched.push_back(l);
          bucket[l].push_back(t);
        });
      }
    }
    out.set_accepting(id, acc);
    std::sort(touched.begin(), touched.end());
    for (Label l : touched) {
      auto& b = bucket[l];
      detail::epsilon_close(src, b, seen);
      auto [target, fresh] = pool.intern(b);
      b.clear();
      if (fresh) {
        out.add_state();
        if (opt.max_states && out.size() > opt.max_states)
          throw ResourceError("determinize: state cap exceeded",
                              {out.size(), 0, pool.bytes() + out.size() * labels * 4});
        if (opt.max_bytes && (out.size() & 1023) == 0 &&
            pool.bytes() + out.size() * labels * sizeof(State) > opt.max_bytes)
          throw ResourceError("determinize: memory cap exceeded",
                              {out.size(), 0, pool.bytes() + out.size() * labels * 4});
      }
      out.set_next(id, l, target);
    }
  }
  if (opt.keep_subsets) out.set_subsets(pool.take_offsets(), pool.take_data());
  return out;
}

namespace detail {

/// Renumbers states in breadth-first order from the initial state, keeping
/// only states for which keep[s] holds (all if keep is empty).
inline Fsa renumber_bfs(const Fsa& in, const std::vector<char>& keep = {}) {
  Fsa out(in.alphabet(), in.arity());
  if (in.empty() || in.initial() == kNoState) return out;
  if (!keep.empty() && !keep[in.initial()]) return out;
  std::vector<State> map(in.size(), kNoState);
  std::vector<State> order{in.initial()};
  map[in.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const State s = order[i];
    for (Label l = 0; l < in.labels(); ++l) {
      const State t = in.next(s, l);
      if (t == kNoState || (!keep.empty() && !keep[t]) || map[t] != kNoState) continue;
      map[t] = static_cast<State>(order.size());
      order.push_back(t);
    }
  }
  out.reserve(order.size());
  for (State s : order) out.add_state(in.accepting(s));
  out.set_initial(0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Label l = 0; l < in.labels(); ++l) {
      const State t = in.next(order[i], l);
      if (t != kNoState && map[t] != kNoState) out.set_next(static_cast<State>(i), l, map[t]);
    }
  if (in.has_subsets()) {
    std::vector<std::size_t> off{0};
    std::vector<State> data;
    for (State s : order) {
      auto sub = in.subset(s);
      data.insert(data.end(), sub.begin(), sub.end());
      off.push_back(data.size());
    }
    out.set_subsets(std::move(off), std::move(data));
  }
  return out;
}

/// States from which an accepting state is reachable.
inline std::vector<char> coaccessible(const Fsa& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> start(n + 1, 0);
  for (State s = 0; s < n; ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) ++start[t + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<State> preds(start[n]);
  auto fill = start;
  for (State s = 0; s < n; ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) preds[fill[t]++] = s;
  std::vector<char> live(n, 0);
  std::vector<State> stack;
  for (State s = 0; s < n; ++s)
    if (m.accepting(s)) {
      live[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const State t = stack.back();
    stack.pop_back();
    for (std::size_t i = start[t]; i < start[t + 1]; ++i)
      if (!live[preds[i]]) {
        live[preds[i]] = 1;
        stack.push_back(preds[i]);
      }
  }
  return live;
}

/// DFA minimization by partition refinement of states and transitions
/// (Valmari-Lehtinen). Works directly on partial automata and discards
/// irrelevant states.
class Minimizer {
 public:
  explicit Minimizer(const Fsa& m) : m_(m) {}

  Fsa run() {
    Fsa out(m_.alphabet(), m_.arity());
    nn_ = static_cast<int>(m_.size());
    if (nn_ == 0 || m_.initial() == kNoState) return out;
    for (State s = 0; s < m_.size(); ++s)
      for (Label l = 0; l < m_.labels(); ++l)
        if (State t = m_.next(s, l); t != kNoState) {
          tail_.push_back(static_cast<int>(s));
          label_.push_back(static_cast<int>(l));
          head_.push_back(static_cast<int>(t));
        }
    mm_ = static_cast<int>(tail_.size());
    blocks_.init(nn_);
    adj_.assign(std::max(mm_, 1), 0);
    first_.assign(nn_ + 1, 0);
    marked_.assign(std::max(mm_, nn_) + 1, 0);
    work_.assign(std::max(mm_, nn_) + 1, 0);

    reach(static_cast<int>(m_.initial()));
    remove_unreachable(tail_, head_);
    for (State s = 0; s < m_.size(); ++s)
      if (m_.accepting(s) && blocks_.L[s] < blocks_.P[0]) reach(static_cast<int>(s));
    const int finals = reached_;
    remove_unreachable(head_, tail_);
    if (finals == 0) return out;

    marked_[0] = finals;
    work_[workers_++] = 0;
    blocks_.split(marked_, work_, workers_);

    cords_.init(mm_);
    if (mm_) {
      // counting sort of transitions by label
      std::vector<int> count(m_.labels() + 1, 0);
      for (int t = 0; t < mm_; ++t) ++count[label_[t] + 1];
      std::partial_sum(count.begin(), count.end(), count.begin());
      for (int t = 0; t < mm_; ++t) cords_.E[count[label_[t]]++] = t;
      cords_.z = 0;
      marked_[0] = 0;
      int a = label_[cords_.E[0]];
      for (int i = 0; i < mm_; ++i) {
        const int t = cords_.E[i];
        if (label_[t] != a) {
          a = label_[t];
          cords_.P[cords_.z++] = i;
          cords_.F[cords_.z] = i;
          marked_[cords_.z] = 0;
        }
        cords_.S[t] = cords_.z;
        cords_.L[t] = i;
      }
      cords_.P[cords_.z++] = mm_;
    }

    make_adjacent(head_);
    int b = 1, c = 0;
    while (c < cords_.z) {
      for (int i = cords_.F[c]; i < cords_.P[c]; ++i) blocks_.mark(tail_[cords_.E[i]], marked_, work_, workers_);
      blocks_.split(marked_, work_, workers_);
      ++c;
      while (b < blocks_.z) {
        for (int i = blocks_.F[b]; i < blocks_.P[b]; ++i)
          for (int j = first_[blocks_.E[i]]; j < first_[blocks_.E[i] + 1]; ++j)
            cords_.mark(adj_[j], marked_, work_, workers_);
        cords_.split(marked_, work_, workers_);
        ++b;
      }
    }

    // Quotient automaton, then canonical numbering.
    Fsa q(m_.alphabet(), m_.arity());
    q.reserve(static_cast<std::size_t>(blocks_.z));
    for (int i = 0; i < blocks_.z; ++i) q.add_state(blocks_.F[i] < finals);
    for (int t = 0; t < mm_; ++t)
      q.set_next(static_cast<State>(blocks_.S[tail_[t]]), static_cast<Label>(label_[t]),
                 static_cast<State>(blocks_.S[head_[t]]));
    q.set_initial(static_cast<State>(blocks_.S[m_.initial()]));
    return renumber_bfs(q);
  }

 private:
  struct Partition {
    int z = 0;
    std::vector<int> E, L, S, F, P;
    void init(int n) {
      z = n > 0;
      E.resize(n);
      L.resize(n);
      S.assign(n, 0);
      F.assign(std::max(n, 1), 0);
      P.assign(std::max(n, 1), 0);
      std::iota(E.begin(), E.end(), 0);
      std::iota(L.begin(), L.end(), 0);
      if (z) {
        F[0] = 0;
        P[0] = n;
      }
    }
    void mark(int e, std::vector<int>& M, std::vector<int>& W, int& w) {
      const int s = S[e], i = L[e], j = F[s] + M[s];
      E[i] = E[j];
      L[E[i]] = i;
      E[j] = e;
      L[e] = j;
      if (!M[s]++) W[w++] = s;
    }
    void split(std::vector<int>& M, std::vector<int>& W, int& w) {
      while (w) {
        const int s = W[--w], j = F[s] + M[s];
        if (j == P[s]) {
          M[s] = 0;
          continue;
        }
        if (M[s] <= P[s] - j) {
          F[z] = F[s];
          P[z] = F[s] = j;
        } else {
          P[z] = P[s];
          F[z] = P[s] = j;
        }
        for (int i = F[z]; i < P[z]; ++i) S[E[i]] = z;
        M[s] = M[z++] = 0;
      }
    }
  };

  void make_adjacent(const std::vector<int>& K) {
    std::fill(first_.begin(), first_.end(), 0);
    for (int t = 0; t < mm_; ++t) ++first_[K[t]];
    for (int q = 0; q < nn_; ++q) first_[q + 1] += first_[q];
    for (int t = mm_; t--;) adj_[--first_[K[t]]] = t;
  }

  void reach(int q) {
    const int i = blocks_.L[q];
    if (i >= reached_) {
      blocks_.E[i] = blocks_.E[reached_];
      blocks_.L[blocks_.E[i]] = i;
      blocks_.E[reached_] = q;
      blocks_.L[q] = reached_++;
    }
  }

  void remove_unreachable(std::vector<int>& T, std::vector<int>& H) {
    make_adjacent(T);
    for (int i = 0; i < reached_; ++i)
      for (int j = first_[blocks_.E[i]]; j < first_[blocks_.E[i] + 1]; ++j) reach(H[adj_[j]]);
    int j = 0;
    for (int t = 0; t < mm_; ++t)
      if (blocks_.L[T[t]] < reached_) {
        H[j] = H[t];
        label_[j] = label_[t];
        T[j] = T[t];
        ++j;
      }
    mm_ = j;
    blocks_.P[0] = reached_;
    reached_ = 0;
  }

  const Fsa& m_;
  int nn_ = 0, mm_ = 0, reached_ = 0, workers_ = 0;
  std::vector<int> tail_, label_, head_, adj_, first_, marked_, work_;
  Partition blocks_, cords_;
};

}  // namespace detail

/// Canonical minimal automaton: states numbered breadth-first from the
/// initial state, labels in alphabet order. Payloads are dropped.
inline Fsa minimize(const Fsa& m) { return detail::Minimizer(m).run(); }

/// Removes states that are not reachable or cannot reach acceptance and
/// renumbers canonically. Payloads are kept.
inline Fsa trim(const Fsa& m) {
  if (m.empty()) return Fsa(m.alphabet(), m.arity());
  return detail::renumber_bfs(m, detail::coaccessible(m));
}

/// Breadth-first canonical renumbering of the accessible part.
inline Fsa accessible(const Fsa& m) { return detail::renumber_bfs(m); }

namespace detail {

inline void require_compatible(const Fsa& a, const Fsa& b) {
  if (a.alphabet() != b.alphabet() || a.arity() != b.arity())
    throw InputError("automata have different alphabets or arities");
}

/// Breadth-first product over pairs of states; `step` maps (s1, s2, label)
/// to a product successor pair or nullopt; `acc` decides acceptance.
template <class Step, class Acc>
Fsa build_pair_product(const Alphabet& a, int arity, std::pair<State, State> start, Step step,
                       Acc acc) {
  Fsa out(a, arity);
  std::vector<std::pair<State, State>> order{start};
  std::unordered_map<std::uint64_t, State> index;
  auto key = [](std::pair<State, State> p) {
    return (std::uint64_t{p.first} << 32) | p.second;
  };
  index.emplace(key(start), 0);
  out.add_state(acc(start));
  out.set_initial(0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto cur = order[i];
    for (Label l = 0; l < out.labels(); ++l) {
      auto nxt = step(cur, l);
      if (!nxt) continue;
      auto [it, fresh] = index.emplace(key(*nxt), static_cast<State>(order.size()));
      if (fresh) {
        order.push_back(*nxt);
        out.add_state(acc(*nxt));
      }
      out.set_next(static_cast<State>(i), l, it->second);
    }
  }
  return out;
}

}  // namespace detail

/// Product automaton for L(m1) n L(m2), trimmed.
inline Fsa intersect(const Fsa& m1, const Fsa& m2) {
  detail::require_compatible(m1, m2);
  if (m1.empty() || m2.empty()) return Fsa(m1.alphabet(), m1.arity());
  auto step = [&](std::pair<State, State> p, Label l) -> std::optional<std::pair<State, State>> {
    const State a = m1.next(p.first, l), b = m2.next(p.second, l);
    if (a == kNoState || b == kNoState) return std::nullopt;
    return std::pair{a, b};
  };
  auto acc = [&](std::pair<State, State> p) { return m1.accepting(p.first) && m2.accepting(p.second); };
  return trim(detail::build_pair_product(m1.alphabet(), m1.arity(), {m1.initial(), m2.initial()},
                                         step, acc));
}

/// Two-variable automaton accepting (u, v)^dagger for u in L(w1), v in L(w2).
inline Fsa pair_product(const Fsa& w1, const Fsa& w2) {
  w1.require_arity(1);
  w2.require_arity(1);
  detail::require_compatible(w1, w2);
  const std::size_t k = w1.letters();
  const auto pad = static_cast<Letter>(k);
  if (w1.empty() || w2.empty()) return Fsa(w1.alphabet(), 2);
  // kNoState - 1 marks a coordinate whose word has ended.
  constexpr State kEnded = kNoState - 1;
  auto advance = [&](const Fsa& m, State s, Letter x) -> State {
    if (x == pad) return (s == kEnded || m.accepting(s)) ? kEnded : kNoState;
    if (s == kEnded) return kNoState;
    return m.next(s, x);
  };
  auto step = [&](std::pair<State, State> p, Label l) -> std::optional<std::pair<State, State>> {
    const State a = advance(w1, p.first, label_first(k, l));
    const State b = advance(w2, p.second, label_second(k, l));
    if (a == kNoState || b == kNoState) return std::nullopt;
    return std::pair{a, b};
  };
  auto acc = [&](std::pair<State, State> p) {
    return (p.first == kEnded || w1.accepting(p.first)) &&
           (p.second == kEnded || w2.accepting(p.second));
  };
  return trim(detail::build_pair_product(w1.alphabet(), 2, {w1.initial(), w2.initial()}, step, acc));
}

/// Quantifies over the other coordinate: a one-variable NFA for
/// {u : exists v, (u, v)^dagger in L(m)} (coordinate 1) or symmetrically.
/// Transitions reading padding in the kept coordinate become unlabeled.
inline Nfa project(const Fsa& m, int coordinate) {
  if (m.arity() != 2) throw InputError("project() needs a two-variable automaton");
  if (coordinate != 1 && coordinate != 2) throw InputError("coordinate must be 1 or 2");
  const std::size_t k = m.letters();
  Nfa out(m.alphabet(), 1);
  for (State s = 0; s < m.size(); ++s) out.add_state(m.accepting(s));
  if (!m.empty() && m.initial() != kNoState) out.add_initial(m.initial());
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l) {
      const State t = m.next(s, l);
      if (t == kNoState) continue;
      const Letter x = coordinate == 1 ? label_first(k, l) : label_second(k, l);
      if (x == k) out.add_epsilon(s, t);
      else out.add_edge(s, x, t);
    }
  return out;
}

/// Swaps the two coordinates of a two-variable automaton.
inline Fsa converse(const Fsa& m) {
  m.require_arity(2);
  const std::size_t k = m.letters();
  Fsa out(m.alphabet(), 2);
  for (State s = 0; s < m.size(); ++s) out.add_state(m.accepting(s));
  out.set_initial(m.initial());
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState)
        out.set_next(s, pair_label(k, label_second(k, l), label_first(k, l)), t);
  return accessible(out);
}

namespace detail {

// Incoming transitions per state, grouped by label.
struct ReversedView {
  const Fsa& m;
  std::vector<std::size_t> start;
  std::vector<Nfa::Edge> in;
  std::vector<State> initial;
  const Alphabet& alphabet() const { return m.alphabet(); }
  int arity() const { return m.arity(); }
  std::size_t labels() const { return m.labels(); }
  std::size_t size() const { return m.size(); }
  std::span<const State> initial_states() const { return initial; }
  bool is_accepting(State q) const { return q == m.initial(); }
  template <class F>
  void for_each_transition(State q, F&& f) const {
    for (std::size_t i = start[q]; i < start[q + 1]; ++i) f(in[i].label, in[i].target);
  }
};

}  // namespace detail

/// Deterministic automaton for the reversed language, built by subset
/// construction from the accepting set. Every state carries its subset of
/// states of m; the result is not minimized. If sigma0(m)^v = tau and
/// sigma0(m^R)^w = T then tau in T iff v w^R in L(m).
inline Fsa reverse_with_subsets(const Fsa& m, const DeterminizeOptions& opt = {}) {
  detail::ReversedView rev{m, std::vector<std::size_t>(m.size() + 1, 0), {}, {}};
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) ++rev.start[t + 1];
  std::partial_sum(rev.start.begin(), rev.start.end(), rev.start.begin());
  rev.in.resize(rev.start.back());
  auto fill = rev.start;
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) rev.in[fill[t]++] = {l, s};
  for (State s = 0; s < m.size(); ++s)
    if (m.accepting(s)) rev.initial.push_back(s);
  DeterminizeOptions o = opt;
  o.keep_subsets = true;
  return determinize(rev, o);
}

namespace detail {

/// Product for L(m1) \ L(m2); the second component kNoState means m2 has
/// already rejected.
inline Fsa difference_product(const Fsa& m1, const Fsa& m2) {
  require_compatible(m1, m2);
  if (m1.empty() || m1.initial() == kNoState) return Fsa(m1.alphabet(), m1.arity());
  const State s2 = m2.empty() ? kNoState : m2.initial();
  auto step = [&](std::pair<State, State> p, Label l) -> std::optional<std::pair<State, State>> {
    const State a = m1.next(p.first, l);
    if (a == kNoState) return std::nullopt;
    const State b = p.second == kNoState ? kNoState : m2.next(p.second, l);
    return std::pair{a, b};
  };
  auto acc = [&](std::pair<State, State> p) {
    return m1.accepting(p.first) && (p.second == kNoState || !m2.accepting(p.second));
  };
  return detail::build_pair_product(m1.alphabet(), m1.arity(), {m1.initial(), s2}, step, acc);
}

/// Up to cap words of L(p) in short-lex order.
inline std::vector<std::vector<Label>> enumerate_shortlex(const Fsa& raw, std::size_t cap) {
  std::vector<std::vector<Label>> out;
  if (cap == 0) return out;
  const Fsa p = trim(raw);
  if (p.empty()) return out;
  const std::size_t n = p.size();

  // Longest path if acyclic (finite language); otherwise unbounded.
  std::vector<std::size_t> indeg(n, 0);
  for (State s = 0; s < n; ++s)
    for (Label l = 0; l < p.labels(); ++l)
      if (State t = p.next(s, l); t != kNoState) ++indeg[t];
  std::vector<State> topo;
  for (State s = 0; s < n; ++s)
    if (!indeg[s]) topo.push_back(s);
  for (std::size_t i = 0; i < topo.size(); ++i)
    for (Label l = 0; l < p.labels(); ++l)
      if (State t = p.next(topo[i], l); t != kNoState && --indeg[t] == 0) topo.push_back(t);
  const bool finite = topo.size() == n;
  std::size_t max_len = std::numeric_limits<std::size_t>::max();
  if (finite) {
    std::vector<std::size_t> longest(n, 0);
    for (auto it = topo.rbegin(); it != topo.rend(); ++it)
      for (Label l = 0; l < p.labels(); ++l)
        if (State t = p.next(*it, l); t != kNoState)
          longest[*it] = std::max(longest[*it], longest[t] + 1);
    max_len = longest[p.initial()];
  }

  // can[r][s]: an accepting state is reachable from s in exactly r steps.
  std::vector<std::vector<char>> can;
  can.emplace_back(n, 0);
  for (State s = 0; s < n; ++s) can[0][s] = p.accepting(s);
  auto extend = [&] {
    const auto& prev = can.back();
    std::vector<char> next(n, 0);
    for (State s = 0; s < n; ++s)
      for (Label l = 0; l < p.labels(); ++l)
        if (State t = p.next(s, l); t != kNoState && prev[t]) {
          next[s] = 1;
          break;
        }
    can.push_back(std::move(next));
  };

  std::vector<Label> word;
  for (std::size_t len = 0; len <= max_len && out.size() < cap; ++len) {
    while (can.size() <= len) extend();
    if (!can[len][p.initial()]) continue;
    word.assign(len, 0);
    // Iterative depth-first search in label order.
    std::vector<std::pair<State, Label>> stack{{p.initial(), 0}};
    while (!stack.empty() && out.size() < cap) {
      auto& [s, l] = stack.back();
      const std::size_t depth = stack.size() - 1;
      if (depth == len) {
        out.push_back(word);
        stack.pop_back();
        continue;
      }
      bool pushed = false;
      while (l < p.labels()) {
        const Label cur = l++;
        const State t = p.next(s, cur);
        if (t != kNoState && can[len - depth - 1][t]) {
          word[depth] = cur;
          stack.emplace_back(t, 0);
          pushed = true;
          break;
        }
      }
      if (!pushed) stack.pop_back();
    }
  }
  return out;
}

}  // namespace detail

/// Up to cap members of L(m1) \ L(m2) in short-lex order, as label
/// sequences. Empty iff L(m1) is contained in L(m2).
inline std::vector<std::vector<Label>> diff_witnesses(const Fsa& m1, const Fsa& m2,
                                                      std::size_t cap = 1) {
  return detail::enumerate_shortlex(detail::difference_product(m1, m2), cap);
}

inline bool included(const Fsa& m1, const Fsa& m2) { return diff_witnesses(m1, m2, 1).empty(); }

inline bool equal_languages(const Fsa& m1, const Fsa& m2) {
  return included(m1, m2) && included(m2, m1);
}

/// Determinize followed by minimize.
template <class Source>
Fsa determinize_minimize(const Source& src, const DeterminizeOptions& opt = {}) {
  return minimize(determinize(src, opt));
}

/// Composite relation {(u, w) : exists v, (u, v) in L(m1), (v, w) in L(m2)},
/// via a non-deterministic product over the middle word, determinized and
/// minimized.
inline Fsa compose(const Fsa& m1, const Fsa& m2, const DeterminizeOptions& opt = {}) {
  m1.require_arity(2);
  m2.require_arity(2);
  detail::require_compatible(m1, m2);
  const std::size_t k = m1.letters();
  const auto pad = static_cast<Letter>(k);
  Nfa nfa(m1.alphabet(), 2);
  if (m1.empty() || m2.empty()) return Fsa(m1.alphabet(), 2);
  // A factor that has finished reading both of its words is parked in kEnded.
  constexpr State kEnded = kNoState - 1;
  struct Move {
    Letter left, right;
    State to;
  };
  auto moves = [&](const Fsa& m, State s, std::vector<Move>& out) {
    out.clear();
    if (s != kEnded) {
      for (Label l = 0; l < m.labels(); ++l)
        if (State t = m.next(s, l); t != kNoState) out.push_back({label_first(k, l), label_second(k, l), t});
      if (m.accepting(s)) out.push_back({pad, pad, kEnded});
    } else {
      out.push_back({pad, pad, kEnded});
    }
  };
  auto done = [&](const Fsa& m, State s) { return s == kEnded || m.accepting(s); };

  std::unordered_map<std::uint64_t, State> index;
  std::vector<std::pair<State, State>> order;
  auto id_of = [&](State a, State b) {
    auto [it, fresh] = index.emplace((std::uint64_t{a} << 32) | b, static_cast<State>(order.size()));
    if (fresh) {
      order.emplace_back(a, b);
      nfa.add_state(done(m1, a) && done(m2, b));
    }
    return it->second;
  };
  nfa.add_initial(id_of(m1.initial(), m2.initial()));
  std::vector<Move> left, right;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [a, b] = order[i];
    moves(m1, a, left);
    moves(m2, b, right);
    for (const Move& p : left)
      for (const Move& q : right) {
        if (p.right != q.left) continue;
        if (p.left == pad && q.right == pad) {
          // all three words ended: nothing further can be read
          if (p.right == pad) continue;
          nfa.add_epsilon(static_cast<State>(i), id_of(p.to, q.to));
        } else {
          nfa.add_edge(static_cast<State>(i), pair_label(k, p.left, q.right), id_of(p.to, q.to));
        }
      }
  }
  return minimize(determinize(nfa, opt));
}

}  // namespace hypgrp
