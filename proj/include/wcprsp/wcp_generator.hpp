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

#include <cstdint>
#include <optional>

#include "wcprsp/group.hpp"
#include "wcprsp/rng.hpp"

namespace wcprsp {

// What one call to the weak-coherent-pulse source delivers to the receiver.
//
// Quantum payload: photon_count copies of `state` (none when the count is 0).
// Leaked payload: only in the malicious branch with more than one photon; the
// receiver learns the count and the classical description of the unitary.
struct PulseEmission {
  std::uint32_t photon_count = 0;
  std::optional<PlusState> state;          // set iff quantum payload with count >= 1
  std::optional<GroupElement> leaked_unitary;  // set iff classical leak

  bool leaked() const { return leaked_unitary.has_value(); }

  friend bool operator==(const PulseEmission&, const PulseEmission&) = default;
};

// One call to the source with unitary g and intensity mu. Honest receivers
// (malicious = false) see n ~ Poisson(mu * eta); a malicious receiver removes
// the channel loss and sees n ~ Poisson(mu).
PulseEmission wcp_emit(GroupElement g, double mu, double eta, bool malicious,
                       RngStream& rng);

}  // namespace wcprsp
