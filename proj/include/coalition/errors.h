// Copyright 2026 The Coalition Sharing Authors
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

#ifndef COALITION_ERRORS_H_
#define COALITION_ERRORS_H_

#include <stdexcept>
#include <string>

namespace coalition {

class CoalitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed coalition structures and oracle tables.
class ValidationError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

class ArgumentError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

// Payments were requested for a coalition with no feasible resource.
class InfeasibleCoalitionError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

// A size guard was exceeded. Guards can be lifted with the
// COALITION_GUARD_OVERRIDE environment variable.
class ResourceLimitError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

class UnsupportedError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

// Instance files that cannot be read. The message names the offending field.
class ParseError : public CoalitionError {
 public:
  using CoalitionError::CoalitionError;
};

// True when COALITION_GUARD_OVERRIDE is set to a non-empty value other than "0".
bool guards_overridden();

// Throws ResourceLimitError(what) when `exceeded` holds and guards are active.
void enforce_guard(bool exceeded, const std::string& what);

}  // namespace coalition

#endif  // COALITION_ERRORS_H_
