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

#include "wcprsp/lambert_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wcprsp/errors.hpp"

namespace wcprsp {

namespace {

constexpr double kInvE = 0.36787944117144233;  // 1/e rounded to double
constexpr int kMaxHalley = 50;

double initial_guess(double x) {
  if (x < -0.25) {
    // Series in p = -sqrt(2(1 + e x)) about the branch point w = -1.
    const double p = -std::sqrt(std::max(0.0, 2.0 * (1.0 + M_E * x)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  const double l1 = std::log(-x);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

double bisect(double x) {
  double lo = -745.0, hi = -1.0;  // w*e^w decreases from 0^- to -1/e here
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (mid * std::exp(mid) > x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double lambert_w_minus1(double x, LambertWTrace& trace) {
  trace = {};
  if (!(x >= -kInvE && x < 0.0)) {
    throw DomainError("lambert_w_minus1: x must lie in [-1/e, 0), got " +
                      std::to_string(x));
  }
  if (x == -kInvE) return -1.0;

  double w = initial_guess(x);
  if (w > -1.0) w = -1.0 - 1e-8;
  for (int i = 0; i < kMaxHalley; ++i) {
    trace.halley_iterations = i + 1;
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    double next = w - step;
    if (!std::isfinite(next)) break;
    if (next > -1.0) next = 0.5 * (w - 1.0);  // stay on the lower branch
    if (std::fabs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(next)) {
      return next;
    }
    w = next;
  }
  if (std::fabs(w * std::exp(w) - x) <= 1e-15 && w <= -1.0) return w;
  trace.used_bisection = true;
  return bisect(x);
}

double lambert_w_minus1(double x) {
  LambertWTrace trace;
  return lambert_w_minus1(x, trace);
}

}  // namespace wcprsp
