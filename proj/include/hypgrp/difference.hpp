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

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hypgrp/alphabet.hpp"
#include "hypgrp/automaton.hpp"
#include "hypgrp/fsa_ops.hpp"

namespace hypgrp {

using ReduceFn = std::function<Word(const Word&)>;

/// Group elements given by reduced words, indexed in insertion order. The
/// identity (empty word) always has index 0.
class DifferenceSet {
 public:
  DifferenceSet() { insert(Word{}); }

  /// Index of w and whether it was new.
  std::pair<std::size_t, bool> insert(const Word& w) {
    auto [it, fresh] = index_.emplace(key(w), elems_.size());
    if (fresh) elems_.push_back(w);
    return {it->second, fresh};
  }

  std::optional<std::size_t> find(const Word& w) const {
    auto it = index_.find(key(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const Word& w) const { return find(w).has_value(); }
  std::size_t size() const noexcept { return elems_.size(); }
  const Word& operator[](std::size_t i) const { return elems_[i]; }
  const std::vector<Word>& elements() const noexcept { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& w : elems_) m = std::max(m, w.size());
    return m;
  }

  /// Elements sorted short-lex, for stable output.
  std::vector<Word> sorted() const {
    std::vector<Word> v = elems_;
    std::sort(v.begin(), v.end(), [](const Word& a, const Word& b) { return shortlex_less(a, b); });
    return v;
  }

 private:
  static std::string key(const Word& w) { return std::string(w.begin(), w.end()); }

  std::vector<Word> elems_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// x^-1 d y with padding standing for the empty word.
inline Word conjugate_step(const Word& d, Letter x, Letter y, std::size_t k,
                           const std::vector<Letter>& inverse) {
  Word w;
  w.reserve(d.size() + 2);
  if (x != k) w.push_back(inverse[x]);
  w.insert(w.end(), d.begin(), d.end());
  if (y != k) w.push_back(y);
  return w;
}

/// Two-variable automaton on the elements of D (state i = element i, initial
/// state 0) with a transition d -> e on (x, y) whenever x^-1 d y reduces to
/// e. Every element is accepting; callers choose acceptance.
inline Fsa difference_table(const DifferenceSet& d, const Alphabet& a,
                            const std::vector<Letter>& inverse, const ReduceFn& reduce) {
  const std::size_t k = a.size();
  Fsa t(a, 2);
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) t.add_state(true);
  t.set_initial(0);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (Label l = 0; l < t.labels(); ++l) {
      const Word e = reduce(conjugate_step(d[i], label_first(k, l), label_second(k, l), k, inverse));
      if (auto j = d.find(e)) t.set_next(static_cast<State>(i), l, static_cast<State>(*j));
    }
  return t;
}

/// Word-difference machine: the accessible part of a difference table with
/// chosen accepting elements; alpha[s] is the element labelling state s.
struct WdMachine {
  Fsa fsa;
  std::vector<Word> alpha;

  std::size_t size() const noexcept { return fsa.size(); }
};

inline WdMachine make_wd_machine(const Fsa& table, const DifferenceSet& d,
                                 const std::vector<std::size_t>& accepting) {
  Fsa t = table;
  for (State s = 0; s < t.size(); ++s) t.set_accepting(s, false);
  for (std::size_t i : accepting) t.set_accepting(static_cast<State>(i), true);
  std::vector<std::size_t> off(t.size() + 1);
  std::vector<State> data(t.size());
  for (State s = 0; s < t.size(); ++s) {
    off[s + 1] = s + 1;
    data[s] = s;
  }
  t.set_subsets(std::move(off), std::move(data));
  WdMachine m{accessible(t), {}};
  for (State s = 0; s < m.fsa.size(); ++s) m.alpha.push_back(d[m.fsa.subset(s)[0]]);
  m.fsa.drop_subsets();
  return m;
}

/// Appends to D the successive differences of the padded pair (u, v),
/// computed step by step as in the difference table. Returns how many
/// elements were new.
inline std::size_t add_pair_differences(DifferenceSet& d, const Word& u, const Word& v,
                                        std::size_t k, const std::vector<Letter>& inverse,
                                        const ReduceFn& reduce) {
  std::size_t added = 0;
  Word cur;
  const std::size_t n = std::max(u.size(), v.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Letter x = i < u.size() ? u[i] : static_cast<Letter>(k);
    const Letter y = i < v.size() ? v[i] : static_cast<Letter>(k);
    cur = reduce(conjugate_step(cur, x, y, k, inverse));
    added += d.insert(cur).second;
  }
  return added;
}

}  // namespace hypgrp
