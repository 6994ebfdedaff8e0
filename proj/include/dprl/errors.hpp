// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#ifndef DPRL_ERRORS_HPP_
#define DPRL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dprl {

// Base class for every error raised by the library. The subclasses map onto
// the CLI exit codes (usage = 1, data = 2, invariant = 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or unusable input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A library invariant or a budget audit failed.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace dprl

#endif  // DPRL_ERRORS_HPP_
