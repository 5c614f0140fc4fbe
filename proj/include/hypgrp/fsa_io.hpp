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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hypgrp/automaton.hpp"
#include "hypgrp/errors.hpp"
#include "hypgrp/presentation.hpp"

namespace hypgrp {

namespace detail {

inline std::string label_text(const Alphabet& a, int arity, Label l) {
  if (arity == 1) return a.name(static_cast<Letter>(l));
  const std::size_t k = a.size();
  auto part = [&](Letter x) { return x == k ? std::string("_") : a.name(x); };
  return part(label_first(k, l)) + "," + part(label_second(k, l));
}

class FsaReader {
 public:
  explicit FsaReader(std::string_view text) : text_(text) {}

  Fsa read() {
    expect_line("fsa v1", "missing 'fsa v1' header");
    const std::string arity = header("arity");
    if (arity != "1" && arity != "2") fail("arity must be 1 or 2");
    Alphabet alphabet(split_ws(header("alphabet")));
    if (header("padding") != "_") fail("padding symbol must be '_'");
    const std::size_t states = number(header("states"));
    const std::string init = header("initial");
    const auto accepting = split_ws(header("accepting"));

    Fsa m(std::move(alphabet), arity == "1" ? 1 : 2);
    m.reserve(states);
    for (std::size_t i = 0; i < states; ++i) m.add_state();
    if (states) m.set_initial(state(init, states));
    else if (!init.empty() && init != "0") fail("initial state in an empty automaton");
    for (const auto& a : accepting) m.set_accepting(state(a, states), true);

    std::string line;
    while (next_line(line)) {
      auto tok = split_ws(line);
      if (!tok.empty() && tok[0] == "trans:") tok.erase(tok.begin());
      if (tok.size() != 3) fail("expected 'source label target'");
      const State s = state(tok[0], states), t = state(tok[2], states);
      const Label l = parse_label(m, tok[1]);
      if (m.next(s, l) != kNoState) fail("duplicate transition");
      m.set_next(s, l, t);
    }
    return m;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("line " + std::to_string(line_no_) + ": " + msg);
  }

  bool next_line(std::string& out) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_no_;
      raw = trim(raw);
      if (raw.empty() || raw.front() == '#') continue;
      out.assign(raw);
      return true;
    }
    return false;
  }

  void expect_line(std::string_view want, const char* msg) {
    std::string line;
    if (!next_line(line) || line != want) fail(msg);
  }

  std::string header(std::string_view key) {
    std::string line;
    if (!next_line(line)) fail("missing '" + std::string(key) + ":' line");
    const auto colon = line.find(':');
    if (colon == std::string::npos || trim(std::string_view(line).substr(0, colon)) != key)
      fail("expected '" + std::string(key) + ":'");
    return std::string(trim(std::string_view(line).substr(colon + 1)));
  }

  std::size_t number(std::string_view s) const {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + std::string(s) + "'");
    return v;
  }

  State state(std::string_view s, std::size_t states) const {
    const std::size_t v = number(s);
    if (v < 1 || v > states) fail("state index " + std::string(s) + " out of range");
    return static_cast<State>(v - 1);
  }

  Letter letter(const Alphabet& a, std::string_view s, bool allow_pad) const {
    if (s == "_") {
      if (!allow_pad) fail("padding not allowed here");
      return a.padding();
    }
    auto x = a.find(s);
    if (!x) fail("unknown letter '" + std::string(s) + "'");
    return *x;
  }

  Label parse_label(const Fsa& m, std::string_view s) const {
    const std::size_t k = m.letters();
    if (m.arity() == 1) return letter(m.alphabet(), s, false);
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) fail("two-variable label needs 'x,y'");
    const Letter x = letter(m.alphabet(), s.substr(0, comma), true);
    const Letter y = letter(m.alphabet(), s.substr(comma + 1), true);
    if (x == k && y == k) fail("label '_,_' is not allowed");
    return pair_label(k, x, y);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace detail

/// Text form; transitions listed by source state then label order.
inline std::string serialize_fsa(const Fsa& m) {
  std::ostringstream os;
  os << "fsa v1\narity: " << m.arity() << "\nalphabet:";
  for (const auto& n : m.alphabet().names()) os << ' ' << n;
  os << "\npadding: _\nstates: " << m.size() << "\ninitial: ";
  os << (m.empty() || m.initial() == kNoState ? 0 : m.initial() + 1) << "\naccepting:";
  for (State s = 0; s < m.size(); ++s)
    if (m.accepting(s)) os << ' ' << s + 1;
  os << '\n';
  for (State s = 0; s < m.size(); ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (State t = m.next(s, l); t != kNoState)
        os << s + 1 << ' ' << detail::label_text(m.alphabet(), m.arity(), l) << ' ' << t + 1
           << '\n';
  return os.str();
}

inline Fsa parse_fsa(std::string_view text) { return detail::FsaReader(text).read(); }

inline Fsa load_fsa(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_fsa(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline void save_fsa(const Fsa& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << serialize_fsa(m);
}

}  // namespace hypgrp
