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
#include <string>
#include <unordered_map>
#include <vector>

#include "hypgrp/automaton.hpp"
#include "hypgrp/difference.hpp"
#include "hypgrp/fsa_ops.hpp"
#include "hypgrp/presentation.hpp"

namespace hypgrp {

/// Ball of the Cayley graph around the identity. Vertex 0 is the identity;
/// dist[] is the breadth-first distance, so it does not depend on the
/// representatives being geodesic.
class CayleyBall {
 public:
  static constexpr std::uint32_t kNone = UINT32_MAX;

  CayleyBall(const Presentation& p, ReduceFn reduce, std::size_t radius,
             std::size_t max_vertices = 5000000)
      : p_(p), reduce_(std::move(reduce)), radius_(radius), k_(p.size()) {
    add(reduce_(Word{}), 0);
    std::size_t level_start = 0;
    for (std::size_t r = 1; r <= radius_; ++r) {
      const std::size_t level_end = reps_.size();
      for (std::size_t i = level_start; i < level_end; ++i)
        for (Letter x = 0; x < k_; ++x) {
          const Word n = reduce_(concat(reps_[i], Word{x}));
          if (!find(n)) {
            if (reps_.size() >= max_vertices)
              throw ResourceError("ball: vertex cap exceeded", {reps_.size(), 0, 0});
            add(n, r);
          }
        }
      level_start = level_end;
    }
    adj_.assign(reps_.size() * k_, kNone);
    for (std::size_t i = 0; i < reps_.size(); ++i)
      for (Letter x = 0; x < k_; ++x)
        if (auto j = find(reduce_(concat(reps_[i], Word{x})))) adj_[i * k_ + x] = *j;
  }

  std::size_t radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return reps_.size(); }
  std::size_t letters() const noexcept { return k_; }
  const Presentation& presentation() const noexcept { return p_; }
  const Word& element(std::uint32_t v) const { return reps_[v]; }
  std::size_t length(std::uint32_t v) const { return dist_[v]; }
  std::uint32_t neighbour(std::uint32_t v, Letter x) const { return adj_[std::size_t{v} * k_ + x]; }

  std::optional<std::uint32_t> find(const Word& rep) const {
    auto it = index_.find(std::string(rep.begin(), rep.end()));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Vertex of the element spelled by w, if it lies in the ball.
  std::optional<std::uint32_t> locate(const Word& w) const { return find(reduce_(w)); }

  /// Distance between two vertices, l(g^-1 h); kNone if beyond the radius.
  std::size_t distance(std::uint32_t g, std::uint32_t h) const {
    if (g == h) return 0;
    auto e = locate(concat(p_.inverse_of(reps_[g]), reps_[h]));
    return e ? dist_[*e] : kNone;
  }

  /// levels[t]: vertices at distance t from the identity lying on some
  /// geodesic from the identity to target.
  std::vector<std::vector<std::uint32_t>> geodesic_levels(std::uint32_t target) const {
    const std::size_t n = dist_[target];
    std::vector<std::vector<std::uint32_t>> levels(n + 1);
    levels[n] = {target};
    std::vector<char> mark(reps_.size(), 0);
    // Walk back from the target: u precedes w when w = u x and l(u) = l(w) - 1.
    for (std::size_t t = n; t-- > 0;) {
      for (std::uint32_t w : levels[t + 1])
        for (Letter x = 0; x < k_; ++x) {
          const std::uint32_t u = neighbour(w, p_.inverse[x]);
          if (u != kNone && dist_[u] == t && !mark[u]) {
            mark[u] = 1;
            levels[t].push_back(u);
          }
        }
      std::sort(levels[t].begin(), levels[t].end());
    }
    return levels;
  }

 private:
  void add(const Word& w, std::size_t d) {
    index_.emplace(std::string(w.begin(), w.end()), static_cast<std::uint32_t>(reps_.size()));
    reps_.push_back(w);
    dist_.push_back(d);
  }

  const Presentation& p_;
  ReduceFn reduce_;
  std::size_t radius_;
  std::size_t k_;
  std::vector<Word> reps_;
  std::vector<std::size_t> dist_;
  std::vector<std::uint32_t> adj_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline CayleyBall build_ball(const Presentation& p, const ReduceFn& reduce, std::size_t radius,
                             std::size_t max_vertices = 5000000) {
  return CayleyBall(p, reduce, radius, max_vertices);
}

/// All geodesic words from g to h in short-lex order. Requires every
/// vertex of such a path to lie in the ball.
inline std::vector<Word> geodesics_between(const CayleyBall& ball, std::uint32_t g, std::uint32_t h,
                                           std::size_t cap = 100000) {
  const Presentation& p = ball.presentation();
  const auto e = ball.locate(concat(p.inverse_of(ball.element(g)), ball.element(h)));
  if (!e) throw InputError("geodesic query leaves the ball");
  const auto levels = ball.geodesic_levels(*e);
  std::vector<std::vector<char>> on(levels.size(), std::vector<char>(ball.size(), 0));
  for (std::size_t t = 0; t < levels.size(); ++t)
    for (std::uint32_t v : levels[t]) on[t][v] = 1;
  std::vector<Word> out;
  Word word;
  const std::size_t n = levels.size() - 1;
  // depth-first in letter order gives lexicographic order
  auto dfs = [&](auto&& self, std::uint32_t v) -> void {
    if (out.size() >= cap) return;
    if (word.size() == n) {
      out.push_back(word);
      return;
    }
    for (Letter x = 0; x < ball.letters(); ++x) {
      const std::uint32_t w = ball.neighbour(v, x);
      if (w == CayleyBall::kNone || !on[word.size() + 1][w]) continue;
      word.push_back(x);
      self(self, w);
      word.pop_back();
    }
  };
  dfs(dfs, 0);
  return out;
}

namespace detail {

// Largest distance between vertices of the two level sets.
inline std::size_t max_level_distance(const CayleyBall& ball, const std::vector<std::uint32_t>& a,
                                      const std::vector<std::uint32_t>& b) {
  std::size_t m = 0;
  for (std::uint32_t p : a)
    for (std::uint32_t q : b) {
      const std::size_t d = ball.distance(p, q);
      m = std::max(m, d == CayleyBall::kNone ? ball.radius() + 1 : d);
    }
  return m;
}

}  // namespace detail

/// Widest geodesic bigon with vertex endpoints: max over equal-length
/// geodesics u, v from the identity to a common vertex of max_t d(u(t), v(t)).
/// By left invariance one endpoint can be taken to be the identity.
inline std::size_t max_bigon_width(const CayleyBall& ball) {
  std::size_t best = 0;
  for (std::uint32_t e = 0; e < ball.size(); ++e) {
    const auto levels = ball.geodesic_levels(e);
    for (const auto& lv : levels) best = std::max(best, detail::max_level_distance(ball, lv, lv));
  }
  return best;
}

struct ConcreteTriangle {
  Word w;  ///< a -> b
  Word u;  ///< b -> c
  Word v;  ///< c -> a
  std::size_t twice_rho_a = 0;
  std::size_t position = 0;  ///< distance from a of the worst companion pair
  std::size_t distance = 0;
};

struct ThinnessObservation {
  std::size_t delta_observed = 0;
  std::size_t triangles = 0;
  ConcreteTriangle witness;
};

/// Largest companion distance over triangles with vertices a = 1, b, c,
/// l(b), l(c) <= vertex_radius (default: half the ball radius, so that all
/// companion distances are measured inside the ball). Companions are taken
/// at integer distance t <= rho(a) from a and, for odd perimeter, at the
/// meeting vertices (one further step on the side a -> b). Every corner of
/// a triangle is the corner a of a translate, so corner a suffices. With
/// shortlex_only the sides are the normal-form representatives; otherwise
/// all geodesic sides are considered.
inline ThinnessObservation max_triangle_thinness(const CayleyBall& ball, bool shortlex_only,
                                                 std::size_t vertex_radius = 0) {
  if (vertex_radius == 0) vertex_radius = ball.radius() / 2;
  const Presentation& p = ball.presentation();
  ThinnessObservation out;
  std::vector<std::uint32_t> verts;
  for (std::uint32_t v = 0; v < ball.size(); ++v)
    if (ball.length(v) <= vertex_radius) verts.push_back(v);

  // level sets of the side from a to x, and of the side from c back to a
  std::vector<std::vector<std::vector<std::uint32_t>>> fwd(ball.size());
  auto levels_to = [&](std::uint32_t x) -> const std::vector<std::vector<std::uint32_t>>& {
    auto& l = fwd[x];
    if (!l.empty()) return l;
    if (!shortlex_only) return l = ball.geodesic_levels(x);
    const Word& w = ball.element(x);
    l.resize(w.size() + 1);
    std::uint32_t cur = 0;
    l[0] = {0};
    for (std::size_t i = 0; i < w.size(); ++i) l[i + 1] = {cur = ball.neighbour(cur, w[i])};
    return l;
  };
  // Shortlex side c -> a is the normal form of c^-1 read from c, so its
  // vertex at distance t from a is c * prefix; these are stored per c.
  std::vector<std::vector<std::vector<std::uint32_t>>> back(ball.size());
  auto levels_from = [&](std::uint32_t c) -> const std::vector<std::vector<std::uint32_t>>& {
    auto& l = back[c];
    if (!l.empty()) return l;
    if (!shortlex_only) return l = levels_to(c);
    const auto ci = ball.locate(p.inverse_of(ball.element(c)));
    const Word& v = ball.element(*ci);
    l.resize(v.size() + 1);
    Word walk = ball.element(c);
    for (std::size_t i = 0; i <= v.size(); ++i) {
      l[v.size() - i] = {*ball.locate(walk)};
      if (i < v.size()) walk.push_back(v[i]);
    }
    return l;
  };

  for (std::uint32_t b : verts)
    for (std::uint32_t c : verts) {
      const std::size_t lu = ball.distance(b, c);
      if (lu == CayleyBall::kNone) continue;
      const std::size_t lw = ball.length(b), lv = ball.length(c);
      ++out.triangles;
      const std::size_t twice = lv + lw - lu;
      const auto& W = levels_to(b);
      const auto& V = levels_from(c);
      auto consider = [&](std::size_t t, std::size_t d) {
        if (d > out.delta_observed || out.triangles == 1 && t == 0) {
          out.delta_observed = d;
          out.witness = {ball.element(b), {}, {}, twice, t, d};
          out.witness.u = ball.element(*ball.locate(concat(p.inverse_of(ball.element(b)), ball.element(c))));
          out.witness.v = ball.element(*ball.locate(p.inverse_of(ball.element(c))));
        }
      };
      for (std::size_t t = 0; 2 * t <= twice; ++t) consider(t, detail::max_level_distance(ball, W[t], V[t]));
      if (twice % 2) {
        const std::size_t m = twice / 2;
        consider(m + 1, detail::max_level_distance(ball, W[m + 1], V[m]));
      }
    }
  return out;
}

/// Compares an automaton against the ball's geodesic words of length up to
/// max_len: a word must be accepted iff it is geodesic, and the automaton
/// must have no accepted extension of a non-geodesic word. Returns the
/// mismatches found (at most cap).
inline std::vector<Word> geodesic_language_mismatches(const CayleyBall& ball, const Fsa& m,
                                                      std::size_t max_len, std::size_t cap = 10) {
  std::vector<Word> bad;
  if (max_len > ball.radius()) throw InputError("word length exceeds the ball radius");
  const std::vector<char> live = m.empty() ? std::vector<char>{} : detail::coaccessible(m);
  Word word;
  auto dfs = [&](auto&& self, std::uint32_t v, State s) -> void {
    if (bad.size() >= cap || word.size() == max_len) return;
    for (Letter x = 0; x < ball.letters(); ++x) {
      const std::uint32_t w = ball.neighbour(v, x);
      const bool geodesic = w != CayleyBall::kNone && ball.length(w) == word.size() + 1;
      const State t = s == kNoState ? kNoState : m.next(s, x);
      word.push_back(x);
      if (geodesic) {
        if (t == kNoState || !m.accepting(t)) bad.push_back(word);
        else self(self, w, t);
      } else if (t != kNoState && live[t]) {
        bad.push_back(word);
      }
      word.pop_back();
      if (bad.size() >= cap) return;
    }
  };
  if (m.empty()) bad.push_back(Word{});
  else dfs(dfs, 0, m.initial());
  return bad;
}

}  // namespace hypgrp
