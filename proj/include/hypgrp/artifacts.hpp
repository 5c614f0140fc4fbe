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

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "hypgrp/difference.hpp"
#include "hypgrp/errors.hpp"
#include "hypgrp/presentation.hpp"
#include "hypgrp/rewriting.hpp"

namespace hypgrp {

/// Flat `key: value` text. Keys keep insertion order; set() on an existing
/// key overwrites in place.
class Report {
 public:
  template <class T>
  Report& set(const std::string& key, const T& value) {
    std::ostringstream os;
    if constexpr (std::is_same_v<T, bool>) os << (value ? "true" : "false");
    else os << value;
    auto it = pos_.find(key);
    if (it == pos_.end()) {
      pos_.emplace(key, entries_.size());
      entries_.emplace_back(key, os.str());
    } else {
      entries_[it->second].second = os.str();
    }
    return *this;
  }

  bool has(const std::string& key) const { return pos_.count(key) != 0; }

  const std::string& get(const std::string& key) const {
    auto it = pos_.find(key);
    if (it == pos_.end()) throw InputError("missing key '" + key + "'");
    return entries_[it->second].second;
  }

  std::size_t get_size(const std::string& key) const {
    const std::string& v = get(key);
    try {
      std::size_t used = 0;
      const unsigned long long n = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
      throw InputError("key '" + key + "': not a number: " + v);
    }
  }

  bool get_bool(const std::string& key) const { return get(key) == "true"; }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string str() const {
    std::string s;
    for (const auto& [k, v] : entries_) s += k + ": " + v + "\n";
    return s;
  }

  static Report parse(std::string_view text, const std::string& origin = "report") {
    Report r;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto colon = line.find(": ");
      if (colon == std::string::npos || colon == 0)
        throw InputError(origin + ":" + std::to_string(line_no) + ": expected 'key: value'");
      r.set(line.substr(0, colon), line.substr(colon + 2));
    }
    return r;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::map<std::string, std::size_t> pos_;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

inline Report load_report(const std::filesystem::path& path) {
  return Report::parse(read_file(path), path.string());
}

/// rules v1: one `lhs -> rhs` line per rule, words in the presentation's
/// letter names ("1" is the empty word).
inline std::string serialize_rules(const RewritingSystem& r) {
  const Alphabet& a = r.alphabet();
  std::string s = "rules v1\nconfluent: ";
  s += r.confluent() ? "true" : "false";
  s += "\ncount: " + std::to_string(r.rules().size()) + "\n";
  for (const Rule& rule : r.rules()) s += format_word(a, rule.lhs) + " -> " + format_word(a, rule.rhs) + "\n";
  return s;
}

inline RewritingSystem parse_rules(const Presentation& p, std::string_view text,
                                   const std::string& origin = "rules") {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> InputError {
    return InputError(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  bool confluent = false;
  std::size_t expected = 0;
  std::vector<Rule> rules;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "rules v1") throw fail("expected 'rules v1'");
      continue;
    }
    if (line.rfind("confluent: ", 0) == 0) {
      confluent = line.substr(11) == "true";
      continue;
    }
    if (line.rfind("count: ", 0) == 0) {
      expected = std::stoul(line.substr(7));
      continue;
    }
    const auto arrow = line.find(" -> ");
    if (arrow == std::string::npos) throw fail("expected 'lhs -> rhs'");
    Rule r;
    try {
      r = {p.parse_word(line.substr(0, arrow)), p.parse_word(line.substr(arrow + 4))};
    } catch (const InputError& e) {
      throw fail(e.what());
    }
    if (!shortlex_less(r.rhs, r.lhs)) throw fail("rule does not decrease in short-lex order");
    rules.push_back(std::move(r));
  }
  if (line_no == 0) throw fail("empty file");
  if (rules.size() != expected) throw fail("rule count does not match header");
  return RewritingSystem(p, std::move(rules), confluent);
}

/// One normal form per line, in the set's order.
inline std::string serialize_differences(const Alphabet& a, const DifferenceSet& d) {
  std::string s;
  for (const Word& w : d) s += format_word(a, w) + "\n";
  return s;
}

}  // namespace hypgrp
