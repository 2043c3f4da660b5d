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

#include <cmath>
#include <limits>

namespace wcprsp {

// A nonnegative quantity stored together with its natural logarithm.
// Bounds such as exp(-x N) underflow long before they become meaningless;
// `log` stays exact when `value` has flushed to zero.
struct LogValue {
  double log = -std::numeric_limits<double>::infinity();
  double value = 0.0;

  static LogValue from_log(double log_value) {
    return {log_value, std::exp(log_value)};
  }
  static LogValue from_value(double v) { return {std::log(v), v}; }
  static LogValue zero() { return {}; }
  static LogValue one() { return {0.0, 1.0}; }

  friend bool operator==(const LogValue&, const LogValue&) = default;
};

// log(exp(a) + exp(b)) without overflow or underflow.
inline double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// The value field is the plain floating sum so that additive identities hold
// exactly on representable values; the log field is computed independently.
inline LogValue operator+(const LogValue& x, const LogValue& y) {
  return {log_add(x.log, y.log), x.value + y.value};
}

inline LogValue operator*(const LogValue& x, const LogValue& y) {
  return {x.log + y.log, x.value * y.value};
}

inline LogValue max(const LogValue& x, const LogValue& y) {
  return x.log >= y.log ? x : y;
}

}  // namespace wcprsp
