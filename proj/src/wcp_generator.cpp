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

#include "wcprsp/wcp_generator.hpp"

#include <cmath>

#include "wcprsp/distributions.hpp"
#include "wcprsp/errors.hpp"

namespace wcprsp {

PulseEmission wcp_emit(GroupElement g, double mu, double eta, bool malicious,
                       RngStream& rng) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ParameterError("wcp_emit: intensity mu must be finite and >= 0");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw ParameterError("wcp_emit: transmittance eta must lie in [0,1]");
  }
  PulseEmission e;
  const double mean = malicious ? mu : mu * eta;
  e.photon_count = static_cast<std::uint32_t>(poisson_sample(mean, rng));
  if (malicious && e.photon_count > 1) {
    e.leaked_unitary = g;
  } else if (e.photon_count >= 1) {
    e.state = act(g, kReferenceState);
  }
  return e;
}

}  // namespace wcprsp
