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

namespace wcprsp {

// Lower real branch W_{-1} of the Lambert function: the solution w <= -1 of
// w * exp(w) = x for -1/e <= x < 0. Throws DomainError outside that range.
//
// Halley iteration seeded by the branch-point series (or the logarithmic
// asymptote away from the branch point); bisection on [-745, -1] if Halley
// has not converged within 50 steps.
double lambert_w_minus1(double x);

// Diagnostics for tests: how the last value was produced.
struct LambertWTrace {
  int halley_iterations = 0;
  bool used_bisection = false;
};
double lambert_w_minus1(double x, LambertWTrace& trace);

}  // namespace wcprsp
