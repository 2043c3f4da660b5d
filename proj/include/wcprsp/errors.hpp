// Copyright 2026 The wcprsp Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace wcprsp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is outside the documented range (negative mean, p > 1, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A special function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A party sent a malformed message. Distinct from a protocol Abort, which is
// a legitimate outcome.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

// An adversary strategy returned d_n > c_n.
class AdversaryContractError : public Error {
 public:
  using Error::Error;
};

// A slack parameter violates one of the bound's validity inequalities.
class ConstraintError : public Error {
 public:
  ConstraintError(std::string inequality, const std::string& detail)
      : Error("constraint violated: " + inequality + " (" + detail + ")"),
        inequality_(std::move(inequality)) {}

  const std::string& inequality() const { return inequality_; }

 private:
  std::string inequality_;
};

// A root finder or sweep found no admissible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace wcprsp
