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
#include <queue>
#include <string>
#include <vector>

#include "hypgrp/alphabet.hpp"
#include "hypgrp/errors.hpp"
#include "hypgrp/presentation.hpp"

namespace hypgrp {

struct Rule {
  Word lhs;
  Word rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

struct KbLimits {
  std::size_t max_rules = 100000;
  /// Equations whose reduced sides exceed this length are set aside; the
  /// resulting system is then reported as non-confluent. 0 means no limit.
  std::size_t max_rule_length = 0;
  std::size_t max_iterations = 5000000;
};

namespace detail {

/// Trie over reversed left-hand sides, used to find a left-hand side that is
/// a suffix of the word being built during reduction.
class SuffixIndex {
 public:
  static constexpr std::int32_t kNone = -1;

  explicit SuffixIndex(std::size_t k = 0) : k_(k) { clear(); }

  void clear() {
    child_.assign(k_, kNone);
    rule_.assign(1, kNone);
  }

  void insert(const Word& lhs, std::int32_t rule) {
    std::size_t node = 0;
    for (auto it = lhs.rbegin(); it != lhs.rend(); ++it) {
      std::int32_t& next = child_[node * k_ + *it];
      if (next == kNone) {
        next = static_cast<std::int32_t>(rule_.size());
        rule_.push_back(kNone);
        child_.resize(child_.size() + k_, kNone);
      }
      node = static_cast<std::size_t>(child_[node * k_ + *it]);
    }
    rule_[node] = rule;
  }

  void erase(const Word& lhs) {
    std::size_t node = 0;
    for (auto it = lhs.rbegin(); it != lhs.rend(); ++it) {
      const std::int32_t next = child_[node * k_ + *it];
      if (next == kNone) return;
      node = static_cast<std::size_t>(next);
    }
    rule_[node] = kNone;
  }

  /// Rule whose lhs is a suffix of w[0, end), shortest first, or kNone.
  std::int32_t match_suffix(const Word& w, std::size_t end) const {
    std::size_t node = 0;
    for (std::size_t j = end; j-- > 0;) {
      const std::int32_t next = child_[node * k_ + w[j]];
      if (next == kNone) return kNone;
      node = static_cast<std::size_t>(next);
      if (rule_[node] != kNone) return rule_[node];
    }
    return kNone;
  }

 private:
  std::size_t k_;
  std::vector<std::int32_t> child_;
  std::vector<std::int32_t> rule_;
};

}  // namespace detail

struct RewritingStats {
  std::size_t rules = 0;
  std::size_t max_lhs_length = 0;
  std::size_t equations_processed = 0;
};

/// A short-lex rewriting system for a group presentation. When confluent it
/// solves the word problem: reduce() returns the short-lex least
/// representative of the input.
class RewritingSystem {
 public:
  using Stats = RewritingStats;

  RewritingSystem() = default;

  RewritingSystem(Presentation p, std::vector<Rule> rules, bool confluent, Stats stats = {})
      : presentation_(std::move(p)),
        rules_(std::move(rules)),
        confluent_(confluent),
        stats_(stats),
        index_(presentation_.size()) {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
      index_.insert(rules_[i].lhs, static_cast<std::int32_t>(i));
      stats_.max_lhs_length = std::max(stats_.max_lhs_length, rules_[i].lhs.size());
    }
    stats_.rules = rules_.size();
  }

  const Presentation& presentation() const noexcept { return presentation_; }
  const Alphabet& alphabet() const noexcept { return presentation_.alphabet; }
  std::size_t letters() const noexcept { return presentation_.size(); }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  bool confluent() const noexcept { return confluent_; }
  const Stats& stats() const noexcept { return stats_; }

  /// Normal form of w. Requires a confluent system.
  Word reduce(const Word& w) const {
    if (!confluent_) throw StateError("reduce() called on a non-confluent rewriting system");
    return rewrite(w);
  }

  /// Normal form of u * v.
  Word reduce(const Word& u, const Word& v) const { return reduce(concat(u, v)); }

  Word inverse(const Word& w) const { return presentation_.inverse_of(w); }

  /// Applies rules until irreducible, without the confluence check.
  Word rewrite(const Word& w) const { return rewrite_with(index_, rules_, w); }

  bool irreducible(const Word& w) const {
    for (std::size_t end = 1; end <= w.size(); ++end)
      if (index_.match_suffix(w, end) != detail::SuffixIndex::kNone) return false;
    return true;
  }

  static Word rewrite_with(const detail::SuffixIndex& index, const std::vector<Rule>& rules,
                           const Word& w) {
    Word out;
    out.reserve(w.size());
    Word pending(w.rbegin(), w.rend());
    while (!pending.empty()) {
      out.push_back(pending.back());
      pending.pop_back();
      const std::int32_t r = index.match_suffix(out, out.size());
      if (r == detail::SuffixIndex::kNone) continue;
      const Rule& rule = rules[static_cast<std::size_t>(r)];
      out.resize(out.size() - rule.lhs.size());
      pending.insert(pending.end(), rule.rhs.rbegin(), rule.rhs.rend());
    }
    return out;
  }

 private:
  Presentation presentation_;
  std::vector<Rule> rules_;
  bool confluent_ = false;
  Stats stats_;
  detail::SuffixIndex index_;
};

namespace detail {

class KnuthBendix {
 public:
  KnuthBendix(const Presentation& p, const KbLimits& limits)
      : p_(p), limits_(limits), index_(p.size()) {}

  RewritingSystem run() {
    const std::size_t k = p_.size();
    for (std::size_t x = 0; x < k; ++x)
      push(Word{static_cast<Letter>(x), p_.inverse[x]}, Word{});
    for (const Word& r : p_.relators) push(r, Word{});

    bool complete = true;
    std::size_t iterations = 0;
    while (!queue_.empty()) {
      if (++iterations > limits_.max_iterations || active_count_ > limits_.max_rules) {
        complete = false;
        break;
      }
      Equation eq = queue_.top();
      queue_.pop();
      Word a = rewrite(eq.a), b = rewrite(eq.b);
      if (a == b) continue;
      if (shortlex_less(a, b)) std::swap(a, b);
      if (limits_.max_rule_length && a.size() > limits_.max_rule_length) {
        complete = false;
        continue;
      }
      add_rule(std::move(a), std::move(b));
    }

    std::vector<Rule> out;
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (active_[i]) out.push_back(rules_[i]);
    std::sort(out.begin(), out.end(),
              [](const Rule& a, const Rule& b) { return shortlex_less(a.lhs, b.lhs); });
    RewritingStats stats;
    stats.equations_processed = iterations;
    return RewritingSystem(p_, std::move(out), complete, stats);
  }

 private:
  struct Equation {
    std::size_t key;
    std::size_t seq;
    Word a, b;
  };
  struct Later {
    bool operator()(const Equation& x, const Equation& y) const {
      return x.key != y.key ? x.key > y.key : x.seq > y.seq;
    }
  };

  void push(Word a, Word b) {
    const std::size_t key = std::max(a.size(), b.size());
    queue_.push(Equation{key, seq_++, std::move(a), std::move(b)});
  }

  Word rewrite(const Word& w) const { return RewritingSystem::rewrite_with(index_, rules_, w); }

  static bool contains_factor(const Word& w, const Word& f) {
    return std::search(w.begin(), w.end(), f.begin(), f.end()) != w.end();
  }

  void add_rule(Word lhs, Word rhs) {
    const auto id = static_cast<std::int32_t>(rules_.size());
    rules_.push_back(Rule{std::move(lhs), std::move(rhs)});
    active_.push_back(true);
    ++active_count_;
    index_.insert(rules_.back().lhs, id);

    // Interreduce: rules whose lhs contains the new lhs go back to the queue;
    // right-hand sides are re-normalised.
    const Word& nl = rules_.back().lhs;
    for (std::size_t i = 0; i + 1 < rules_.size(); ++i) {
      if (!active_[i]) continue;
      if (contains_factor(rules_[i].lhs, nl)) {
        active_[i] = false;
        --active_count_;
        index_.erase(rules_[i].lhs);
        push(rules_[i].lhs, rules_[i].rhs);
      } else if (contains_factor(rules_[i].rhs, nl)) {
        rules_[i].rhs = rewrite(rules_[i].rhs);
      }
    }

    for (std::size_t i = 0; i < rules_.size(); ++i) {
      if (!active_[i]) continue;
      overlaps(static_cast<std::size_t>(id), i);
      if (i != static_cast<std::size_t>(id)) overlaps(i, static_cast<std::size_t>(id));
    }
  }

  // Critical pairs from a proper suffix of lhs(i) equal to a proper prefix
  // of lhs(j).
  void overlaps(std::size_t i, std::size_t j) {
    const Word& l1 = rules_[i].lhs;
    const Word& l2 = rules_[j].lhs;
    const std::size_t m = std::min(l1.size(), l2.size());
    for (std::size_t len = 1; len < m; ++len) {
      if (!std::equal(l1.end() - static_cast<std::ptrdiff_t>(len), l1.end(), l2.begin()))
        continue;
      Word a = rules_[i].rhs;
      a.insert(a.end(), l2.begin() + static_cast<std::ptrdiff_t>(len), l2.end());
      Word b(l1.begin(), l1.end() - static_cast<std::ptrdiff_t>(len));
      b.insert(b.end(), rules_[j].rhs.begin(), rules_[j].rhs.end());
      push(std::move(a), std::move(b));
    }
  }

  const Presentation& p_;
  KbLimits limits_;
  SuffixIndex index_;
  std::vector<Rule> rules_;
  std::vector<bool> active_;
  std::size_t active_count_ = 0;
  std::priority_queue<Equation, std::vector<Equation>, Later> queue_;
  std::size_t seq_ = 0;
};

}  // namespace detail

/// Knuth-Bendix completion with respect to short-lex order. On hitting a
/// limit the partial system is returned with confluent() == false.
inline RewritingSystem kb_complete(const Presentation& p, const KbLimits& limits = {}) {
  return detail::KnuthBendix(p, limits).run();
}

}  // namespace hypgrp
