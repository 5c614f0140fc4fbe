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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypgrp/errors.hpp"

namespace hypgrp {

using Letter = std::uint8_t;
using Word = std::vector<Letter>;

/// Label of a transition. For one-variable automata this is the letter; for
/// two-variable automata it encodes a padded pair, see pair_label().
using Label = std::uint32_t;

/// Ordered set of letter names. Index order is the total order used for
/// short-lex comparison. The padding symbol is the index size().
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() >= 255) throw InputError("alphabet too large");
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i].empty() || names_[i] == "_" || names_[i] == "$" ||
          names_[i].find_first_of(" \t\r\n,#") != std::string::npos)
        throw InputError("invalid letter name '" + names_[i] + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j])
          throw InputError("duplicate letter '" + names_[i] + "'");
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  Letter padding() const noexcept { return static_cast<Letter>(names_.size()); }
  const std::string& name(Letter x) const { return names_.at(x); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  std::optional<Letter> find(std::string_view s) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == s) return static_cast<Letter>(i);
    return std::nullopt;
  }

  bool single_char() const {
    return std::all_of(names_.begin(), names_.end(),
                       [](const std::string& n) { return n.size() == 1; });
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

// Padded-pair labels. With k letters, (x, y) for x, y in [0, k] maps to
// x * (k + 1) + y. The excluded pair (k, k) is the largest code, so the valid
// labels are exactly [0, (k + 1)^2 - 1), ordered lexicographically with the
// padding symbol greatest in each coordinate.

inline constexpr std::size_t pair_label_count(std::size_t k) {
  return (k + 1) * (k + 1) - 1;
}

inline constexpr Label pair_label(std::size_t k, Letter x, Letter y) {
  return static_cast<Label>(x * (k + 1) + y);
}

inline constexpr Letter label_first(std::size_t k, Label l) {
  return static_cast<Letter>(l / (k + 1));
}

inline constexpr Letter label_second(std::size_t k, Label l) {
  return static_cast<Letter>(l % (k + 1));
}

/// Short-lex order: shorter first, then lexicographic in letter order.
inline bool shortlex_less(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

/// Prefix of length min(i, l(w)).
inline Word prefix(const Word& w, std::size_t i) {
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(i, w.size())));
}

inline Word reversed(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

inline Word concat(const Word& a, const Word& b) {
  Word r;
  r.reserve(a.size() + b.size());
  r.insert(r.end(), a.begin(), a.end());
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

/// Encodes (u, v)^dagger as a sequence of pair labels.
inline std::vector<Label> padded_pair(std::size_t k, const Word& u, const Word& v) {
  const std::size_t n = std::max(u.size(), v.size());
  std::vector<Label> out(n);
  const auto pad = static_cast<Letter>(k);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = pair_label(k, i < u.size() ? u[i] : pad, i < v.size() ? v[i] : pad);
  return out;
}

/// Splits a padded label sequence back into its two words. Throws if the
/// sequence is not a padded pair.
inline std::pair<Word, Word> unpad_pair(std::size_t k, std::span<const Label> labels) {
  Word u, v;
  bool u_done = false, v_done = false;
  for (Label l : labels) {
    const Letter x = label_first(k, l), y = label_second(k, l);
    if (x == k) u_done = true;
    else if (u_done) throw InputError("padding inside first coordinate");
    else u.push_back(x);
    if (y == k) v_done = true;
    else if (v_done) throw InputError("padding inside second coordinate");
    else v.push_back(y);
  }
  return {std::move(u), std::move(v)};
}

/// Renders a word using letter names; the empty word prints as "1".
inline std::string format_word(const Alphabet& a, std::span<const Letter> w) {
  if (w.empty()) return "1";
  const bool compact = a.single_char();
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!compact && i) s += ' ';
    s += a.name(w[i]);
  }
  return s;
}

}  // namespace hypgrp
