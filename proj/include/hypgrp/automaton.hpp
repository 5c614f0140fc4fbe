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

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hypgrp/alphabet.hpp"
#include "hypgrp/errors.hpp"

namespace hypgrp {

using State = std::uint32_t;
inline constexpr State kNoState = std::numeric_limits<State>::max();

/// Partial deterministic automaton over a one-letter (arity 1) or padded-pair
/// (arity 2) alphabet. A missing transition rejects. States may carry a
/// subset-of-states payload (from reversal or determinization).
class Fsa {
 public:
  Fsa() = default;

  Fsa(Alphabet base, int arity) : alphabet_(std::move(base)), arity_(arity) {
    if (arity != 1 && arity != 2) throw InputError("arity must be 1 or 2");
    labels_ = arity == 1 ? alphabet_.size() : pair_label_count(alphabet_.size());
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int arity() const noexcept { return arity_; }
  std::size_t letters() const noexcept { return alphabet_.size(); }
  std::size_t labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return accepting_.size(); }
  bool empty() const noexcept { return accepting_.empty(); }

  State initial() const noexcept { return initial_; }
  void set_initial(State s) { initial_ = s; }

  bool accepting(State s) const { return accepting_[s] != 0; }
  void set_accepting(State s, bool a) { accepting_[s] = a ? 1 : 0; }

  State next(State s, Label l) const { return table_[std::size_t{s} * labels_ + l]; }
  void set_next(State s, Label l, State t) { table_[std::size_t{s} * labels_ + l] = t; }
  std::span<const State> row(State s) const {
    return {table_.data() + std::size_t{s} * labels_, labels_};
  }

  State add_state(bool accepting = false) {
    accepting_.push_back(accepting ? 1 : 0);
    table_.resize(table_.size() + labels_, kNoState);
    return static_cast<State>(accepting_.size() - 1);
  }

  void reserve(std::size_t n) {
    accepting_.reserve(n);
    table_.reserve(n * labels_);
  }

  std::size_t transitions() const {
    std::size_t n = 0;
    for (State t : table_) n += t != kNoState;
    return n;
  }

  std::size_t accepting_count() const {
    std::size_t n = 0;
    for (char a : accepting_) n += a != 0;
    return n;
  }

  bool has_subsets() const noexcept { return !subset_offsets_.empty(); }
  std::span<const State> subset(State s) const {
    return {subset_data_.data() + subset_offsets_[s],
            subset_offsets_[s + 1] - subset_offsets_[s]};
  }
  void set_subsets(std::vector<std::size_t> offsets, std::vector<State> data) {
    subset_offsets_ = std::move(offsets);
    subset_data_ = std::move(data);
  }
  void drop_subsets() {
    subset_offsets_.clear();
    subset_data_.clear();
  }

  /// State reached from s on the label sequence, or kNoState.
  State walk(State s, std::span<const Label> input) const {
    for (Label l : input) {
      if (s == kNoState) return kNoState;
      s = next(s, l);
    }
    return s;
  }

  bool accepts(std::span<const Label> input) const {
    if (empty() || initial_ == kNoState) return false;
    const State s = walk(initial_, input);
    return s != kNoState && accepting(s);
  }

  /// Membership of a word (arity 1).
  bool run(const Word& w) const {
    require_arity(1);
    check_word(w);
    std::vector<Label> input(w.begin(), w.end());
    return accepts(input);
  }

  /// Membership of the padded pair (u, v)^dagger (arity 2).
  bool run(const Word& u, const Word& v) const {
    require_arity(2);
    check_word(u);
    check_word(v);
    return accepts(padded_pair(letters(), u, v));
  }

  void require_arity(int a) const {
    if (arity_ != a)
      throw InputError("expected a " + std::to_string(a) + "-variable automaton");
  }

  friend bool operator==(const Fsa& a, const Fsa& b) {
    return a.alphabet_ == b.alphabet_ && a.arity_ == b.arity_ && a.initial_ == b.initial_ &&
           a.accepting_ == b.accepting_ && a.table_ == b.table_;
  }

 private:
  void check_word(const Word& w) const {
    for (Letter x : w)
      if (x >= letters()) throw InputError("symbol outside alphabet");
  }

  Alphabet alphabet_;
  int arity_ = 1;
  std::size_t labels_ = 0;
  State initial_ = kNoState;
  std::vector<char> accepting_;
  std::vector<State> table_;
  std::vector<std::size_t> subset_offsets_;
  std::vector<State> subset_data_;
};

/// Non-deterministic automaton with optional unlabeled transitions and any
/// number of initial states.
class Nfa {
 public:
  struct Edge {
    Label label;
    State target;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
  };

  Nfa() = default;
  Nfa(Alphabet base, int arity) : alphabet_(std::move(base)), arity_(arity) {
    if (arity != 1 && arity != 2) throw InputError("arity must be 1 or 2");
    labels_ = arity == 1 ? alphabet_.size() : pair_label_count(alphabet_.size());
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  int arity() const noexcept { return arity_; }
  std::size_t letters() const noexcept { return alphabet_.size(); }
  std::size_t labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return accepting_.size(); }

  State add_state(bool accepting = false) {
    accepting_.push_back(accepting ? 1 : 0);
    edges_.emplace_back();
    epsilon_.emplace_back();
    return static_cast<State>(accepting_.size() - 1);
  }
  void add_initial(State s) { initial_.push_back(s); }
  void add_edge(State from, Label l, State to) { edges_[from].push_back({l, to}); }
  void add_epsilon(State from, State to) { epsilon_[from].push_back(to); }
  void set_accepting(State s, bool a) { accepting_[s] = a ? 1 : 0; }

  std::span<const State> initial_states() const { return initial_; }
  bool is_accepting(State s) const { return accepting_[s] != 0; }
  std::span<const Edge> edges(State s) const { return edges_[s]; }
  std::span<const State> epsilons(State s) const { return epsilon_[s]; }
  bool has_epsilon() const {
    for (const auto& e : epsilon_)
      if (!e.empty()) return true;
    return false;
  }

  template <class F>
  void for_each_transition(State s, F&& f) const {
    for (const Edge& e : edges_[s]) f(e.label, e.target);
  }

 private:
  Alphabet alphabet_;
  int arity_ = 1;
  std::size_t labels_ = 0;
  std::vector<State> initial_;
  std::vector<char> accepting_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<std::vector<State>> epsilon_;
};

}  // namespace hypgrp
