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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hypgrp {

/// Malformed input: bad file, unknown symbol, wrong arity.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called on a value that does not satisfy its
/// precondition, e.g. reducing with a non-confluent system.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A configured cap (states, rules, memory) was hit. Carries whatever the
/// computation had counted before giving up.
class ResourceError : public std::runtime_error {
 public:
  struct Stats {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t bytes_estimate = 0;
  };

  ResourceError(const std::string& what, Stats stats)
      : std::runtime_error(what), stats_(stats) {}

  const Stats& stats() const noexcept { return stats_; }

 private:
  Stats stats_;
};

}  // namespace hypgrp
