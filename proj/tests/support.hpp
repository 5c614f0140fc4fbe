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

#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hypgrp/autstruct.hpp"
#include "hypgrp/automaton.hpp"
#include "hypgrp/fsa_io.hpp"
#include "hypgrp/hyperbolicity.hpp"

namespace testing_support {

using hypgrp::Alphabet;
using hypgrp::Fsa;
using hypgrp::Label;
using hypgrp::State;
using hypgrp::Word;

inline Fsa random_dfa(std::mt19937& rng, const Alphabet& a, std::size_t n, double density = 0.7,
                      double accept = 0.3) {
  Fsa m(a, 1);
  std::bernoulli_distribution edge(density), acc(accept);
  std::uniform_int_distribution<State> pick(0, static_cast<State>(n - 1));
  for (std::size_t i = 0; i < n; ++i) m.add_state(acc(rng));
  m.set_initial(0);
  for (State s = 0; s < n; ++s)
    for (Label l = 0; l < m.labels(); ++l)
      if (edge(rng)) m.set_next(s, l, pick(rng));
  return m;
}

inline Word random_word(std::mt19937& rng, std::size_t k, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> letter(0, static_cast<int>(k) - 1);
  Word w(len(rng));
  for (auto& x : w) x = static_cast<hypgrp::Letter>(letter(rng));
  return w;
}

/// All words over k letters of length <= n, in short-lex order.
inline std::vector<Word> all_words(std::size_t k, std::size_t n) {
  std::vector<Word> out{{}};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= n; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (std::size_t x = 0; x < k; ++x) {
        Word w = out[i];
        w.push_back(static_cast<hypgrp::Letter>(x));
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

inline std::string data_file(const std::string& name) {
  return std::string(HYPGRP_DATA_DIR) + "/" + name + ".hgp";
}

inline hypgrp::Presentation group(const std::string& name) {
  return hypgrp::load_presentation(data_file(name));
}

/// Structure and (for hyperbolic groups) the verifier's report, built once
/// per test process.
struct Built {
  hypgrp::AutomaticStructure s;
  hypgrp::HyperbolicityReport h;
  hypgrp::ReduceFn reduce() const {
    const hypgrp::Reducer* r = &s.reducer;
    return [r](const Word& w) { return r->reduce(w); };
  }
};

inline const Built& built(const std::string& name, std::size_t max_iter = 20) {
  static std::map<std::string, std::unique_ptr<Built>> cache;
  auto& slot = cache[name];
  if (!slot) {
    const hypgrp::Presentation p = group(name);
    slot = std::make_unique<Built>();
    slot->s = hypgrp::build_structure(hypgrp::kb_complete(p, hypgrp::structure_kb_limits(p)));
    hypgrp::HyperbolicityLimits lim;
    lim.max_iterations = max_iter;
    slot->h = hypgrp::verify_hyperbolic(slot->s, lim);
  }
  return *slot;
}

inline Word word_of(const hypgrp::Presentation& p, const std::string& text) { return p.parse_word(text); }

}  // namespace testing_support
