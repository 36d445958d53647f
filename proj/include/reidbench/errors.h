// Copyright 2026 The reidbench Authors
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

#ifndef REIDBENCH_ERRORS_H_
#define REIDBENCH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace reidbench {

// Base for every error the toolkit raises on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value is outside its domain (e.g. race code 63).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A tabular input is missing a required column or has a malformed header.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A data row holds an unparseable or invariant-violating value.
class DataError : public Error {
 public:
  using Error::Error;
};

// A configuration file or parameter set is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Two tables that must cover the same blocks do not.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

}  // namespace reidbench

#endif  // REIDBENCH_ERRORS_H_
