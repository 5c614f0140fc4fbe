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

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hypgrp/alphabet.hpp"
#include "hypgrp/errors.hpp"

namespace hypgrp {

/// A finite group presentation over A = X u X^-1. The alphabet order is the
/// short-lex order; inverse is an involution on letter indices.
struct Presentation {
  Alphabet alphabet;
  std::vector<Letter> inverse;
  std::vector<Letter> generators;
  std::vector<Word> relators;

  std::size_t size() const noexcept { return alphabet.size(); }

  Word inverse_of(const Word& w) const {
    Word r(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) r[w.size() - 1 - i] = inverse[w[i]];
    return r;
  }

  /// Parses letters with optional grouping and integer exponents, e.g.
  /// "a^-1 b^-1 a b", "(ab)^7", "ABab". "1" denotes the empty word.
  Word parse_word(std::string_view text) const;
};

namespace detail {

class WordParser {
 public:
  WordParser(const Presentation& p, std::string_view s) : p_(p), s_(s) {}

  Word parse() {
    Word w = sequence();
    skip();
    if (pos_ != s_.size())
      throw InputError("unexpected '" + std::string(1, s_[pos_]) + "' in word '" +
                       std::string(s_) + "'");
    return w;
  }

 private:
  void skip() {
    while (pos_ < s_.size() &&
           (std::isspace(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '*' ||
            s_[pos_] == '.'))
      ++pos_;
  }

  Word sequence() {
    Word w;
    for (;;) {
      skip();
      if (pos_ == s_.size() || s_[pos_] == ')') return w;
      Word item = atom();
      item = power(std::move(item));
      w.insert(w.end(), item.begin(), item.end());
    }
  }

  Word atom() {
    if (s_[pos_] == '(') {
      ++pos_;
      Word inner = sequence();
      if (pos_ == s_.size() || s_[pos_] != ')')
        throw InputError("unbalanced '(' in word '" + std::string(s_) + "'");
      ++pos_;
      return inner;
    }
    if (s_[pos_] == '1' &&
        (pos_ + 1 == s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      ++pos_;
      return {};
    }
    // Longest matching letter name.
    std::size_t best = 0;
    Letter letter = 0;
    for (std::size_t i = 0; i < p_.alphabet.size(); ++i) {
      const std::string& n = p_.alphabet.name(static_cast<Letter>(i));
      if (n.size() > best && s_.substr(pos_, n.size()) == n) {
        best = n.size();
        letter = static_cast<Letter>(i);
      }
    }
    if (best == 0)
      throw InputError("unknown letter at '" + std::string(s_.substr(pos_)) + "'");
    pos_ += best;
    return Word{letter};
  }

  Word power(Word base) {
    skip();
    if (pos_ == s_.size() || s_[pos_] != '^') return base;
    ++pos_;
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw InputError("missing exponent in word '" + std::string(s_) + "'");
    const long n = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (neg) base = p_.inverse_of(base);
    Word out;
    for (long i = 0; i < n; ++i) out.insert(out.end(), base.begin(), base.end());
    return out;
  }

  const Presentation& p_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline Word Presentation::parse_word(std::string_view text) const {
  return detail::WordParser(*this, text).parse();
}

/// Builds a presentation from generator names, their inverse names and an
/// optional explicit letter order (empty: each generator followed by its
/// inverse). Relators are given in parse_word() syntax.
namespace detail {

// "lhs = rhs" is accepted as the relator lhs * rhs^-1.
inline Word parse_relator(const Presentation& p, const std::string& r) {
  Word w;
  if (auto eq = r.find('='); eq != std::string::npos)
    w = concat(p.parse_word(r.substr(0, eq)), p.inverse_of(p.parse_word(r.substr(eq + 1))));
  else
    w = p.parse_word(r);
  if (w.empty()) throw InputError("empty relator");
  return w;
}

}  // namespace detail

inline Presentation make_presentation(const std::vector<std::string>& gens,
                                      const std::vector<std::string>& inverses,
                                      const std::vector<std::string>& relators,
                                      std::vector<std::string> order = {}) {
  if (gens.size() != inverses.size())
    throw InputError("every generator needs exactly one inverse");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (gens[j] == inverses[i])
        throw InputError("inverse '" + inverses[i] + "' of '" + gens[i] +
                         "' is itself a generator; declare x^2 as a relator instead");
      if (i != j && inverses[i] == inverses[j])
        throw InputError("inverse '" + inverses[i] + "' declared twice");
    }
  }
  if (order.empty()) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      order.push_back(gens[i]);
      order.push_back(inverses[i]);
    }
  }
  Presentation p;
  p.alphabet = Alphabet(order);
  if (p.alphabet.size() != 2 * gens.size())
    throw InputError("order must list every generator and inverse exactly once");
  p.inverse.assign(p.alphabet.size(), 0);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    auto g = p.alphabet.find(gens[i]);
    auto h = p.alphabet.find(inverses[i]);
    if (!g || !h)
      throw InputError("order does not mention '" + (g ? inverses[i] : gens[i]) + "'");
    p.inverse[*g] = *h;
    p.inverse[*h] = *g;
    p.generators.push_back(*g);
  }
  for (const auto& r : relators) p.relators.push_back(detail::parse_relator(p, r));
  return p;
}

/// Parses the `hgp v1` presentation format.
inline Presentation parse_presentation(std::string_view text) {
  std::vector<std::string> gens, invs, order, rels;
  std::vector<std::size_t> rel_lines;
  bool have_inverses = false;
  std::size_t lineno = 0;
  bool header = false;
  std::istringstream in{std::string(text)};
  auto fail = [&](const std::string& msg) -> InputError {
    return InputError("line " + std::to_string(lineno) + ": " + msg);
  };
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "hgp v1") throw fail("expected header 'hgp v1'");
      header = true;
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw fail("expected 'key: value'");
    const std::string_view key = detail::trim(line.substr(0, colon));
    const std::string_view value = detail::trim(line.substr(colon + 1));
    if (key == "generators") {
      gens = detail::split_ws(value);
    } else if (key == "inverses") {
      have_inverses = true;
      std::vector<std::string> pairs = detail::split_ws(value);
      invs.assign(gens.size(), "");
      for (const auto& pr : pairs) {
        const auto eq = pr.find('=');
        if (eq == std::string::npos) throw fail("inverse declaration '" + pr + "' lacks '='");
        const std::string g = pr.substr(0, eq), h = pr.substr(eq + 1);
        auto it = std::find(gens.begin(), gens.end(), g);
        if (it == gens.end()) throw fail("inverse declared for unknown generator '" + g + "'");
        auto& slot = invs[static_cast<std::size_t>(it - gens.begin())];
        if (!slot.empty()) throw fail("generator '" + g + "' has two inverses");
        slot = h;
      }
      for (std::size_t i = 0; i < gens.size(); ++i)
        if (invs[i].empty()) throw fail("generator '" + gens[i] + "' has no inverse");
    } else if (key == "order") {
      order = detail::split_ws(value);
    } else if (key == "relator") {
      rels.emplace_back(value);
      rel_lines.push_back(lineno);
    } else {
      throw fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (!header) throw InputError("empty presentation file");
  if (gens.empty()) throw InputError("no generators declared");
  if (!have_inverses) {
    for (const auto& g : gens) {
      if (g.size() != 1 || !std::islower(static_cast<unsigned char>(g[0])))
        throw InputError("inverses must be declared for generator '" + g + "'");
      invs.emplace_back(1, static_cast<char>(std::toupper(static_cast<unsigned char>(g[0]))));
    }
  }
  Presentation p = make_presentation(gens, invs, {}, order);
  for (std::size_t i = 0; i < rels.size(); ++i) {
    lineno = rel_lines[i];
    try {
      p.relators.push_back(detail::parse_relator(p, rels[i]));
    } catch (const InputError& e) {
      throw fail(e.what());
    }
  }
  return p;
}

inline Presentation load_presentation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_presentation(ss.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace hypgrp
