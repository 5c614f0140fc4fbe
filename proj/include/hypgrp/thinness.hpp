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
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hypgrp/autstruct.hpp"
#include "hypgrp/difference.hpp"
#include "hypgrp/fsa_ops.hpp"

namespace hypgrp {

/// Inscribed-point distances of a triangle with side lengths lu = |bc|,
/// lv = |ca|, lw = |ab|, stored doubled so that odd perimeters stay exact.
struct MeetingParameters {
  std::size_t twice_a = 0, twice_b = 0, twice_c = 0;
  bool odd = false;

  double rho_a() const { return twice_a / 2.0; }
  double rho_b() const { return twice_b / 2.0; }
  double rho_c() const { return twice_c / 2.0; }
};

inline MeetingParameters meeting_parameters(std::size_t lu, std::size_t lv, std::size_t lw) {
  if (lu > lv + lw || lv > lu + lw || lw > lu + lv)
    throw InputError("side lengths violate the triangle inequality");
  return {lv + lw - lu, lw + lu - lv, lu + lv - lw, (lu + lv + lw) % 2 == 1};
}

/// Differences collected from triangles: d1 holds the elements joining
/// meeting vertices, d2 the corner-prefix differences, all = d1 u d2.
struct TriangleDifferenceSet {
  DifferenceSet d1;
  DifferenceSet d2;
  DifferenceSet all;

  /// Returns how many elements are new to `all`.
  std::size_t add(const std::vector<Word>& e1, const std::vector<Word>& e2) {
    std::size_t added = 0;
    for (const Word& w : e2) {
      d2.insert(w);
      added += all.insert(w).second;
    }
    for (const Word& w : e1) {
      d1.insert(w);
      added += all.insert(w).second;
    }
    return added;
  }

  std::size_t max_length() const { return all.max_length(); }
};

struct TriangleDifferences {
  std::vector<Word> d1;
  std::vector<Word> d2;
};

namespace detail {

// Walks from a corner along p and along q read backwards. The second
// coordinate letter y moves the q-side vertex by y^-1.
inline void corner_differences(const Word& p, const Word& q, std::size_t twice_rho,
                               const Reducer& red, TriangleDifferences& out) {
  const std::size_t k = red.letters();
  const auto& inv = red.presentation().inverse;
  const std::size_t m = twice_rho / 2;
  Word g;
  out.d2.push_back(g);
  for (std::size_t i = 0; i < m; ++i) {
    g = red.reduce(conjugate_step(g, p[i], inv[q[q.size() - 1 - i]], k, inv));
    out.d2.push_back(g);
  }
  if (twice_rho % 2) g = red.reduce(conjugate_step(g, p[m], static_cast<Letter>(k), k, inv));
  out.d1.push_back(g);
}

}  // namespace detail

/// Differences of the short-lex triangle with sides u: b -> c, v: c -> a,
/// w: a -> b. d1 lists the corner elements in the order a, b, c.
inline TriangleDifferences triangle_differences(const Word& u, const Word& v, const Word& w,
                                                const Reducer& red) {
  if (!red.reduce(concat(concat(w, u), v)).empty())
    throw InputError("triangle sides do not close up");
  for (const Word* side : {&u, &v, &w})
    if (red.reduce(*side) != *side) throw InputError("triangle side is not in normal form");
  const MeetingParameters mp = meeting_parameters(u.size(), v.size(), w.size());
  TriangleDifferences out;
  detail::corner_differences(w, v, mp.twice_a, red, out);
  detail::corner_differences(u, w, mp.twice_b, red, out);
  detail::corner_differences(v, u, mp.twice_c, red, out);
  return out;
}

struct SamplingParams {
  std::size_t count = 10000;
  std::size_t max_len = 50;
  std::uint64_t seed = 1;
  std::size_t max_batches = 100;
};

/// Random word of L(w) of length up to len, by a uniform walk that stops
/// early at a state without successors.
template <class Rng>
Word random_accepted_word(const Fsa& w, std::size_t len, Rng& rng) {
  Word out;
  if (w.empty()) return out;
  State s = w.initial();
  std::vector<Letter> next;
  for (std::size_t i = 0; i < len; ++i) {
    next.clear();
    for (Letter x = 0; x < w.letters(); ++x)
      if (State t = w.next(s, x); t != kNoState && w.accepting(t)) next.push_back(x);
    if (next.empty()) break;
    const Letter x = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    out.push_back(x);
    s = w.next(s, x);
  }
  return out;
}

/// Triangles with two random sides in L(W); batches run until one adds
/// nothing new.
inline TriangleDifferenceSet sample_triangle_differences(const AutomaticStructure& s,
                                                         const SamplingParams& params,
                                                         std::size_t* batches = nullptr) {
  if (params.count == 0) throw InputError("sample count must be positive");
  const Reducer& red = s.reducer;
  std::mt19937_64 rng(params.seed);
  TriangleDifferenceSet out;
  std::size_t b = 0;
  for (; b < params.max_batches;) {
    ++b;
    std::size_t added = 0;
    for (std::size_t i = 0; i < params.count; ++i) {
      const std::size_t l1 = std::uniform_int_distribution<std::size_t>(0, params.max_len)(rng);
      const std::size_t l2 = std::uniform_int_distribution<std::size_t>(0, params.max_len)(rng);
      const Word w = random_accepted_word(s.word_acceptor, l1, rng);
      const Word u = random_accepted_word(s.word_acceptor, l2, rng);
      const Word v = red.reduce(red.inverse(concat(w, u)));
      const TriangleDifferences t = triangle_differences(u, v, w, red);
      added += out.add(t.d1, t.d2);
    }
    if (added == 0) break;
  }
  if (batches) *batches = b;
  return out;
}

struct FrdState {
  State sigma;        ///< state of W
  State Sigma;        ///< state of the reversed acceptor
  std::uint32_t g;    ///< index into the difference set
  std::uint8_t flag;  ///< 1 once a pair (x, $) has been read
};

/// Two-variable machine reading the two sides leaving a corner up to the
/// meeting vertices.
struct Frd {
  Fsa fsa;
  std::vector<FrdState> states;

  std::size_t size() const noexcept { return fsa.size(); }
};

/// Accessible part of the product of W, the reversed acceptor wr and the
/// difference table of dt. (x, y) moves the difference g to x^-1 g y^-1.
inline Frd build_FRD(const TriangleDifferenceSet& dt, const Fsa& w, const Fsa& wr,
                     const Reducer& red, std::size_t max_states = 0) {
  const std::size_t k = w.letters();
  const auto pad = static_cast<Letter>(k);
  const auto& inv = red.presentation().inverse;
  const std::size_t nd = dt.all.size();
  const std::size_t labels = pair_label_count(k);
  Frd out{Fsa(w.alphabet(), 2), {}};
  if (w.empty() || wr.empty()) return out;

  std::vector<std::uint32_t> step(nd * labels, UINT32_MAX);
  for (std::size_t i = 0; i < nd; ++i)
    for (Letter x = 0; x < k; ++x)
      for (Letter y = 0; y <= k; ++y) {
        const Word e = red.reduce(conjugate_step(dt.all[i], x, y == pad ? pad : inv[y], k, inv));
        if (auto j = dt.all.find(e)) step[i * labels + pair_label(k, x, y)] = static_cast<std::uint32_t>(*j);
      }
  std::vector<char> in_d1(nd, 0);
  for (std::size_t i = 0; i < nd; ++i) in_d1[i] = dt.d1.contains(dt.all[i]);

  std::unordered_map<std::uint64_t, State> index;
  const std::uint64_t nw = w.size(), nr = wr.size();
  auto id_of = [&](const FrdState& q) {
    const std::uint64_t key = ((std::uint64_t{q.g} * nr + q.Sigma) * nw + q.sigma) * 2 + q.flag;
    auto [it, fresh] = index.emplace(key, static_cast<State>(out.states.size()));
    if (fresh) {
      out.states.push_back(q);
      out.fsa.add_state(in_d1[q.g] != 0);
      if (max_states && out.states.size() > max_states)
        throw ResourceError("FRD: state cap exceeded", {out.states.size(), 0, 0});
    }
    return it->second;
  };
  id_of({w.initial(), wr.initial(), 0, 0});
  out.fsa.set_initial(0);
  for (std::size_t i = 0; i < out.states.size(); ++i) {
    const FrdState q = out.states[i];
    if (q.flag) continue;
    for (Letter x = 0; x < k; ++x) {
      const State s2 = w.next(q.sigma, x);
      if (s2 == kNoState) continue;
      for (Letter y = 0; y <= k; ++y) {
        const Label l = pair_label(k, x, y);
        const std::uint32_t g2 = step[q.g * labels + l];
        if (g2 == UINT32_MAX) continue;
        const State S2 = y == pad ? q.Sigma : wr.next(q.Sigma, y);
        if (S2 == kNoState) continue;
        out.fsa.set_next(static_cast<State>(i), l, id_of({s2, S2, g2, static_cast<std::uint8_t>(y == pad)}));
      }
    }
  }
  return out;
}

struct AcceptTriple {
  State a, b, c;
  friend bool operator==(const AcceptTriple&, const AcceptTriple&) = default;
  friend auto operator<=>(const AcceptTriple&, const AcceptTriple&) = default;
};

/// Triples of accepting FRD states that close up into a triangle: each
/// corner's W state lies in the next corner's reversed-acceptor subset and
/// g_c g_b g_a = 1. Sorted lexicographically.
inline std::vector<AcceptTriple> accept_triples(const Frd& frd, const Fsa& wr,
                                                const TriangleDifferenceSet& dt,
                                                const Reducer& red) {
  std::vector<AcceptTriple> out;
  if (frd.fsa.empty()) return out;
  std::size_t nw = 0;
  for (State S = 0; S < wr.size(); ++S)
    for (State q : wr.subset(S)) nw = std::max<std::size_t>(nw, q + 1);
  for (const FrdState& q : frd.states) nw = std::max<std::size_t>(nw, q.sigma + 1);
  std::vector<char> member(wr.size() * nw, 0);
  for (State S = 0; S < wr.size(); ++S)
    for (State q : wr.subset(S)) member[S * nw + q] = 1;
  auto in = [&](State tau, State upsilon) {  // sigma(tau) in Sigma(upsilon)
    return member[frd.states[upsilon].Sigma * nw + frd.states[tau].sigma] != 0;
  };

  std::vector<State> acc;
  std::vector<std::vector<State>> by_g(dt.all.size());
  for (State t = 0; t < frd.size(); ++t)
    if (frd.fsa.accepting(t)) {
      acc.push_back(t);
      by_g[frd.states[t].g].push_back(t);
    }
  std::unordered_map<std::uint64_t, std::int64_t> closing;
  auto close = [&](std::uint32_t gb, std::uint32_t ga) {
    auto [it, fresh] = closing.emplace((std::uint64_t{gb} << 32) | ga, -1);
    if (fresh) {
      const Word c = red.reduce(red.inverse(concat(dt.all[gb], dt.all[ga])));
      if (auto j = dt.all.find(c)) it->second = static_cast<std::int64_t>(*j);
    }
    return it->second;
  };
  for (State a : acc)
    for (State b : acc) {
      if (!in(a, b)) continue;
      const std::int64_t gc = close(frd.states[b].g, frd.states[a].g);
      if (gc < 0) continue;
      for (State c : by_g[static_cast<std::size_t>(gc)])
        if (in(b, c) && in(c, a)) out.push_back({a, b, c});
    }
  return out;
}

/// Deterministic reversal of FRD with one start state {tau} per chosen
/// accepting tau. A state accepts when its subset contains the initial FRD
/// state.
struct FrdReverse {
  std::size_t labels = 0;
  std::vector<State> next;
  std::vector<char> accepting;
  std::vector<State> single;  ///< start state for each FRD state, or kNoState

  std::size_t size() const noexcept { return accepting.size(); }
  State step(State p, Label l) const { return next[std::size_t{p} * labels + l]; }
};

inline FrdReverse reverse_frd(const Frd& frd, const std::vector<char>& starts,
                              std::size_t max_bytes = 0) {
  const Fsa& m = frd.fsa;
  FrdReverse out;
  out.labels = m.labels();
  out.single.assign(m.size(), kNoState);
  std::vector<std::size_t> start(m.size() + 1, 0);
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) ++start[t + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<Nfa::Edge> in(start.back());
  auto fill = start;
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState) in[fill[t]++] = {l, s};

  detail::SubsetPool pool;
  auto add = [&](std::span<const State> set) {
    auto [id, fresh] = pool.intern(set);
    if (fresh) {
      out.accepting.push_back(!set.empty() && set.front() == m.initial());
      out.next.resize(out.next.size() + out.labels, kNoState);
      if (max_bytes && pool.bytes() + out.next.size() * sizeof(State) > max_bytes)
        throw ResourceError("FRD reversal: memory cap exceeded",
                            {pool.size(), 0, pool.bytes() + out.next.size() * sizeof(State)});
    }
    return id;
  };
  for (State t = 0; t < m.size(); ++t)
    if (starts[t]) {
      const State one[1] = {t};
      out.single[t] = add(one);
    }
  std::vector<std::vector<State>> bucket(out.labels);
  std::vector<Label> touched;
  for (State id = 0; id < pool.size(); ++id) {
    touched.clear();
    for (State q : pool.get(id))
      for (std::size_t i = start[q]; i < start[q + 1]; ++i) {
        if (bucket[in[i].label].empty()) touched.push_back(in[i].label);
        bucket[in[i].label].push_back(in[i].target);
      }
    std::sort(touched.begin(), touched.end());
    for (Label l : touched) {
      auto& b = bucket[l];
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      const State t = add(b);
      out.next[std::size_t{id} * out.labels + l] = t;
      b.clear();
    }
  }
  return out;
}

/// FRD states from which some state of an accept triple can be reached,
/// i.e. the states visited while reading a corner of an actual triangle.
inline std::vector<char> corner_states(const Frd& frd, const std::vector<AcceptTriple>& triples) {
  Fsa m = frd.fsa;
  for (State q = 0; q < m.size(); ++q) m.set_accepting(q, false);
  for (const AcceptTriple& t : triples)
    for (State q : {t.a, t.b, t.c}) m.set_accepting(q, true);
  if (m.empty()) return {};
  return detail::coaccessible(m);
}

/// Non-deterministic geodesic-pairs automaton. States [0, first_part) are
/// FRD states of the first leg; the others are pairs of FRD^R states (or
/// kEnded) for the two remaining legs. Usable as a determinize() source.
struct Ngp {
  static constexpr State kEnded = kNoState - 1;

  Alphabet base;
  std::size_t label_count = 0;
  std::size_t first_part = 0;
  std::vector<State> frd_state;                ///< first-part state -> FRD state
  std::vector<std::pair<State, State>> pairs;  ///< second-part states
  std::vector<char> accept;
  std::vector<std::size_t> offsets{0};
  std::vector<Nfa::Edge> edges;
  State start = 0;

  const Alphabet& alphabet() const { return base; }
  int arity() const { return 2; }
  std::size_t labels() const { return label_count; }
  std::size_t size() const { return accept.size(); }
  std::span<const State> initial_states() const { return {&start, 1}; }
  bool is_accepting(State q) const { return accept[q] != 0; }
  template <class F>
  void for_each_transition(State q, F&& f) const {
    for (std::size_t i = offsets[q]; i < offsets[q + 1]; ++i) f(edges[i].label, edges[i].target);
  }
  std::size_t bytes() const {
    return edges.capacity() * sizeof(Nfa::Edge) + offsets.capacity() * sizeof(std::size_t) +
           pairs.capacity() * sizeof(pairs[0]) + accept.capacity();
  }
};

inline Ngp build_NGP(const Frd& frd, const std::vector<AcceptTriple>& triples,
                     std::size_t max_bytes = 0) {
  const Fsa& f = frd.fsa;
  const std::size_t k = f.letters();
  const auto pad = static_cast<Letter>(k);
  constexpr State kEnded = Ngp::kEnded;
  Ngp out;
  out.base = f.alphabet();
  out.label_count = f.labels();
  if (f.empty() || triples.empty()) {  // a single rejecting state
    out.first_part = 1;
    out.frd_state.push_back(0);
    out.accept.push_back(0);
    out.offsets.push_back(0);
    return out;
  }
  const std::vector<char> useful = corner_states(frd, triples);
  std::vector<char> starts(f.size(), 0);
  for (const AcceptTriple& t : triples) starts[t.b] = starts[t.c] = 1;
  const FrdReverse r = reverse_frd(frd, starts, max_bytes);

  // Legs after the jump: the first reads (z, x) with z free, the second
  // (x, z). Padding on x means the leg has already arrived at its vertex.
  std::vector<std::vector<State>> leg1(r.size() * k), leg2(r.size() * k), odd1(r.size());
  for (State p = 0; p < r.size(); ++p) {
    for (Letter x = 0; x < k; ++x)
      for (Letter z = 0; z < k; ++z) {
        if (State t = r.step(p, pair_label(k, z, x)); t != kNoState) leg1[p * k + x].push_back(t);
        if (State t = r.step(p, pair_label(k, x, z)); t != kNoState) leg2[p * k + x].push_back(t);
      }
    for (Letter z = 0; z < k; ++z)
      if (State t = r.step(p, pair_label(k, z, pad)); t != kNoState) odd1[p].push_back(t);
    for (auto* v : {&leg1, &leg2})
      for (Letter x = 0; x < k; ++x) {
        auto& s = (*v)[p * k + x];
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
      }
    std::sort(odd1[p].begin(), odd1[p].end());
    odd1[p].erase(std::unique(odd1[p].begin(), odd1[p].end()), odd1[p].end());
  }
  const std::vector<State> ended{kEnded};
  const std::vector<State> none;
  auto done = [&](State p) { return p == kEnded || r.accepting[p]; };
  auto leg = [&](const std::vector<std::vector<State>>& table, State p, Letter x) -> const std::vector<State>& {
    if (x == pad) return done(p) ? ended : none;
    if (p == kEnded) return none;
    return table[p * k + x];
  };

  std::vector<State> first_id(f.size(), kNoState);
  std::unordered_map<std::uint64_t, State> pair_id;
  auto first = [&](State sigma) {
    if (first_id[sigma] == kNoState) {
      first_id[sigma] = static_cast<State>(out.frd_state.size());
      out.frd_state.push_back(sigma);
    }
    return first_id[sigma];
  };
  // First-part ids are fixed up front so that pair states follow them.
  // Only FRD states on some triangle corner are kept.
  for (State s = 0; s < f.size(); ++s)
    if (!frd.states[s].flag && useful[s]) first(s);
  out.first_part = out.frd_state.size();
  out.start = first_id[f.initial()];
  auto second = [&](State p1, State p2) {
    auto [it, fresh] = pair_id.emplace((std::uint64_t{p1} << 32) | p2,
                                       static_cast<State>(out.first_part + out.pairs.size()));
    if (fresh) out.pairs.emplace_back(p1, p2);
    return it->second;
  };

  auto triples_of = [&](State a) {
    auto lo = std::lower_bound(triples.begin(), triples.end(), AcceptTriple{a, 0, 0});
    auto hi = std::lower_bound(triples.begin(), triples.end(), AcceptTriple{a + 1, 0, 0});
    return std::make_pair(lo, hi);
  };

  std::vector<Nfa::Edge> buf;
  auto jump = [&](State p1, State p2, Letter xab, Letter xac) {
    const auto& t1 = leg(leg1, p1, xab);
    if (t1.empty()) return;
    const auto& t2 = leg(leg2, p2, xac);
    for (State a : t1)
      for (State b : t2)
        if (a != kEnded || b != kEnded) buf.push_back({pair_label(k, xab, xac), second(a, b)});
  };

  // Accepting flags are set after exploration; first-part states are
  // explored in FRD order, then pairs as they are discovered.
  std::vector<char> b_equals_c(f.size(), 0);
  for (const AcceptTriple& t : triples)
    if (t.b == f.initial() && t.c == f.initial()) b_equals_c[t.a] = 1;

  const std::size_t total_first = out.first_part;
  for (std::size_t id = 0; id < total_first + out.pairs.size(); ++id) {
    buf.clear();
    if (id < total_first) {
      const State sigma = out.frd_state[id];
      for (Letter x = 0; x < k; ++x)
        for (Letter y = 0; y < k; ++y)
          if (State t = f.next(sigma, pair_label(k, x, y)); t != kNoState && useful[t])
            buf.push_back({pair_label(k, x, y), first_id[t]});
      // even perimeter: the jump happens after a balanced first leg
      for (auto [it, hi] = triples_of(sigma); it != hi; ++it)
        for (Letter xab = 0; xab <= k; ++xab)
          for (Letter xac = 0; xac <= k; ++xac)
            if (xab != pad || xac != pad) jump(r.single[it->b], r.single[it->c], xab, xac);
      // odd perimeter: the first leg's final (x, $) is fused with the first
      // (z, $) and (x_ac, $) moves of the two other legs
      for (Letter xab = 0; xab < k; ++xab) {
        const State s2 = f.next(sigma, pair_label(k, xab, pad));
        if (s2 == kNoState) continue;
        for (auto [it, hi] = triples_of(s2); it != hi; ++it)
          for (State a : odd1[r.single[it->b]])
            for (Letter xac = 0; xac < k; ++xac)
              if (State b = r.step(r.single[it->c], pair_label(k, xac, pad)); b != kNoState)
                buf.push_back({pair_label(k, xab, xac), second(a, b)});
      }
    } else {
      const auto [p1, p2] = out.pairs[id - total_first];
      for (Letter xab = 0; xab <= k; ++xab)
        for (Letter xac = 0; xac <= k; ++xac)
          if (xab != pad || xac != pad) jump(p1, p2, xab, xac);
    }
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());
    out.edges.insert(out.edges.end(), buf.begin(), buf.end());
    out.offsets.push_back(out.edges.size());
    if (max_bytes && out.bytes() + pair_id.size() * 32 > max_bytes)
      throw ResourceError("NGP: memory cap exceeded",
                          {total_first + out.pairs.size(), out.edges.size(), out.bytes() + pair_id.size() * 32});
  }

  out.accept.assign(total_first + out.pairs.size(), 0);
  for (std::size_t id = 0; id < total_first; ++id) out.accept[id] = b_equals_c[out.frd_state[id]];
  for (std::size_t i = 0; i < out.pairs.size(); ++i)
    out.accept[total_first + i] = done(out.pairs[i].first) && done(out.pairs[i].second);
  return out;
}

namespace detail {

/// Random members of the trimmed automaton's language, by walks that stop
/// at an accepting state once a randomly drawn length has been reached.
template <class Rng>
std::vector<std::vector<Label>> random_members(const Fsa& raw, std::size_t count,
                                               std::size_t max_len, Rng& rng) {
  std::vector<std::vector<Label>> out;
  const Fsa p = trim(raw);
  if (p.empty() || count == 0) return out;
  std::vector<Label> next, word;
  for (std::size_t attempt = 0; attempt < 4 * count && out.size() < count; ++attempt) {
    const std::size_t target = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
    State s = p.initial();
    word.clear();
    for (;;) {
      if (p.accepting(s) && word.size() >= target) {
        out.push_back(word);
        break;
      }
      if (word.size() > 2 * max_len) break;
      next.clear();
      for (Label l = 0; l < p.labels(); ++l)
        if (p.next(s, l) != kNoState) next.push_back(l);
      if (next.empty()) break;
      const Label l = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
      word.push_back(l);
      s = p.next(s, l);
    }
  }
  return out;
}

}  // namespace detail

/// delta + 2(gamma + gamma') + 3.
inline std::size_t general_triangle_bound(std::size_t delta, std::size_t gamma,
                                          std::size_t gamma_prime) {
  return delta + 2 * (gamma + gamma_prime) + 3;
}

struct ThinnessParams {
  SamplingParams sampling;
  std::size_t max_rounds = 10;
  std::size_t cex_cap = 500;
  std::size_t mem_cap_bytes = std::size_t{8} << 30;
};

struct ThinnessRound {
  std::size_t round = 0;
  std::size_t d_total = 0;
  std::size_t frd_states = 0;
  std::size_t frd_corner_states = 0;  ///< those leading to an accept triple
  std::size_t accept_triples = 0;
  std::size_t ngp_states = 0;
  std::size_t gp_states = 0;
  std::size_t gp_minimal = 0;
  std::size_t witnesses = 0;
  std::size_t added = 0;
};

struct ThinnessReport {
  bool verified = false;
  bool inconclusive = false;
  std::string abort_reason;
  ResourceError::Stats abort_stats;
  bool gp_within_product = true;
  TriangleDifferenceSet differences;
  std::size_t sample_batches = 0;
  std::size_t delta_raw = 0;
  std::size_t delta_plus_one = 0;
  std::size_t frd_states = 0;
  std::size_t frd_corner_states = 0;  ///< those leading to an accept triple
  std::size_t accept_triples = 0;
  std::size_t ngp_states = 0;
  std::size_t gp_states = 0;
  std::size_t gp_minimal = 0;
  std::size_t general_bound = 0;
  std::vector<ThinnessRound> rounds;
  Frd frd;
  Fsa gp;
};

/// Samples the difference set, then refines it until GP accepts every pair
/// in L(W) x L(W^R). gamma_prime feeds the general bound.
inline ThinnessReport compute_thinness(const AutomaticStructure& s, const ThinnessParams& params,
                                       std::size_t gamma_prime) {
  const Reducer& red = s.reducer;
  const Fsa& w = s.word_acceptor;
  ThinnessReport r;
  DeterminizeOptions det;
  det.max_bytes = params.mem_cap_bytes;
  try {
    r.differences = sample_triangle_differences(s, params.sampling, &r.sample_batches);
    const Fsa wr = reverse_with_subsets(w, det);
    const Fsa product = pair_product(w, wr);
    std::mt19937_64 rng(params.sampling.seed ^ 0x5851f42d4c957f2dULL);
    for (std::size_t n = 1;; ++n) {
      if (n > params.max_rounds) {
        r.inconclusive = true;
        r.abort_reason = "round cap reached";
        break;
      }
      ThinnessRound round;
      round.round = n;
      round.d_total = r.differences.all.size();
      r.rounds.push_back(round);
      ThinnessRound& cur = r.rounds.back();
      r.frd = build_FRD(r.differences, w, wr, red);
      cur.frd_states = r.frd.size();
      const auto triples = accept_triples(r.frd, wr, r.differences, red);
      cur.accept_triples = triples.size();
      const auto corner = corner_states(r.frd, triples);
      cur.frd_corner_states = static_cast<std::size_t>(std::count(corner.begin(), corner.end(), 1));
      Fsa gp;
      {
        const Ngp ngp = build_NGP(r.frd, triples, params.mem_cap_bytes);
        cur.ngp_states = ngp.size();
        DeterminizeOptions o = det;
        if (o.max_bytes) o.max_bytes = o.max_bytes > ngp.bytes() ? o.max_bytes - ngp.bytes() : 1;
        gp = determinize(ngp, o);
      }
      cur.gp_states = gp.size();
      r.gp = minimize(gp);
      cur.gp_minimal = r.gp.size();
      if (!included(r.gp, product)) r.gp_within_product = false;
      // Half of the witnesses are the short-lex least, the rest random, so
      // that one round sees triangles of many shapes.
      const Fsa missing = detail::difference_product(product, r.gp);
      auto witnesses = detail::enumerate_shortlex(missing, (params.cex_cap + 1) / 2);
      if (!witnesses.empty()) {
        auto more = detail::random_members(missing, params.cex_cap / 2, 2 * params.sampling.max_len, rng);
        witnesses.insert(witnesses.end(), more.begin(), more.end());
      }
      cur.witnesses = witnesses.size();
      if (witnesses.empty()) {
        r.verified = true;
        break;
      }
      const std::size_t k = s.letters();
      for (const auto& lw : witnesses) {
        auto [w1, w2] = unpad_pair(k, lw);
        const Word v = reversed(w2);
        const Word u = red.reduce(red.inverse(concat(v, w1)));
        const TriangleDifferences t = triangle_differences(u, v, w1, red);
        cur.added += r.differences.add(t.d1, t.d2);
      }
      if (cur.added == 0) {
        r.inconclusive = true;
        r.abort_reason = "witnesses added no new differences";
        break;
      }
    }
  } catch (const ResourceError& e) {
    r.inconclusive = true;
    r.abort_reason = e.what();
    r.abort_stats = e.stats();
  }
  if (!r.rounds.empty()) {
    const ThinnessRound& last = r.rounds.back();
    r.frd_states = last.frd_states;
    r.frd_corner_states = last.frd_corner_states;
    r.accept_triples = last.accept_triples;
    r.ngp_states = last.ngp_states;
    r.gp_states = last.gp_states;
    r.gp_minimal = last.gp_minimal;
  }
  r.delta_raw = r.differences.max_length();
  r.delta_plus_one = r.delta_raw + 1;
  r.general_bound = general_triangle_bound(r.delta_raw, s.gamma, gamma_prime);
  return r;
}

}  // namespace hypgrp
