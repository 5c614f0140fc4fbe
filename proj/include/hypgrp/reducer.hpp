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

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hypgrp/automaton.hpp"
#include "hypgrp/presentation.hpp"
#include "hypgrp/rewriting.hpp"

namespace hypgrp {

/// Solves the word problem by rewriting with a (possibly incomplete) rule
/// set, then, when an acceptor and a difference table are attached,
/// replacing the first prefix the acceptor rejects by a short-lex smaller
/// equal word found through the table. Every step is sound; the result is
/// the normal form once the attached structure is correct.
class Reducer {
 public:
  Reducer() = default;
  explicit Reducer(RewritingSystem rules)
      : rules_(std::make_shared<RewritingSystem>(std::move(rules))) {}

  const Presentation& presentation() const { return rules_->presentation(); }
  const RewritingSystem& rules() const { return *rules_; }
  std::size_t letters() const { return rules_->letters(); }

  /// acceptor: prefix-closed one-variable automaton; table: difference
  /// table whose initial state is the identity.
  void attach(Fsa acceptor, Fsa table) {
    acceptor_ = std::make_shared<Fsa>(std::move(acceptor));
    table_ = std::make_shared<Fsa>(std::move(table));
  }

  bool has_structure() const noexcept { return acceptor_ != nullptr; }

  Word reduce(const Word& w) const {
    Word cur = w;
    for (;;) {
      cur = rules_->rewrite(cur);
      if (!acceptor_ || acceptor_->empty()) return cur;
      State s = acceptor_->initial();
      std::size_t i = 0;
      for (; i < cur.size(); ++i) {
        s = acceptor_->next(s, cur[i]);
        if (s == kNoState) break;
      }
      if (i == cur.size()) return cur;
      auto u = reduce_prefix({cur.data(), i + 1});
      if (!u) return cur;
      u->insert(u->end(), cur.begin() + static_cast<std::ptrdiff_t>(i + 1), cur.end());
      cur = std::move(*u);
    }
  }

  Word operator()(const Word& w) const { return reduce(w); }

  Word reduce(const Word& u, const Word& v) const { return reduce(concat(u, v)); }

  Word inverse(const Word& w) const { return presentation().inverse_of(w); }

  /// Normal form of u^-1 v.
  Word difference(const Word& u, const Word& v) const { return reduce(concat(inverse(u), v)); }

  bool equal(const Word& u, const Word& v) const { return difference(u, v).empty(); }

 private:
  enum Mode : std::uint32_t { kEq, kLt, kGt, kEnded };

  // A word u <_sl p with (p, u) leading from the identity back to it.
  std::optional<Word> reduce_prefix(std::span<const Letter> p) const {
    const Fsa& t = *table_;
    const std::size_t k = t.letters();
    const std::size_t keys = t.size() * 4;
    const std::size_t n = p.size();
    constexpr std::uint32_t kUnset = ~0u;
    // back[i * keys + key] = (previous key << 8) | letter read in u
    std::vector<std::uint64_t> back((n + 1) * keys, kUnset);
    std::vector<std::uint32_t> cur{t.initial() * 4 + kEq}, next;
    back[cur[0]] = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Letter x = p[i];
      next.clear();
      auto visit = [&](std::uint32_t from, State e, std::uint32_t mode, Letter y) {
        if (e == kNoState) return;
        const std::uint32_t key = e * 4 + mode;
        auto& slot = back[(i + 1) * keys + key];
        if (slot != kUnset) return;
        slot = (std::uint64_t{from} << 8) | y;
        next.push_back(key);
      };
      for (std::uint32_t key : cur) {
        const State d = key / 4;
        const auto mode = key % 4;
        if (mode != kEnded)
          for (Letter y = 0; y < k; ++y) {
            const std::uint32_t m = mode != kEq ? mode : y < x ? kLt : y > x ? kGt : kEq;
            visit(key, t.next(d, pair_label(k, x, y)), m, y);
          }
        visit(key, t.next(d, pair_label(k, x, static_cast<Letter>(k))), kEnded,
              static_cast<Letter>(k));
      }
      std::swap(cur, next);
    }
    const State id = t.initial();
    for (std::uint32_t want : {id * 4 + kEnded, id * 4 + kLt}) {
      if (back[n * keys + want] == kUnset) continue;
      Word u;
      std::uint32_t key = want;
      for (std::size_t i = n; i > 0; --i) {
        const std::uint64_t b = back[i * keys + key];
        const auto y = static_cast<Letter>(b & 0xff);
        if (y != k) u.push_back(y);
        key = static_cast<std::uint32_t>(b >> 8);
      }
      std::reverse(u.begin(), u.end());
      return u;
    }
    return std::nullopt;
  }

  std::shared_ptr<const RewritingSystem> rules_;
  std::shared_ptr<const Fsa> acceptor_;
  std::shared_ptr<const Fsa> table_;
};

}  // namespace hypgrp
