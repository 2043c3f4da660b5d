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

#include <array>
#include <cstdint>
#include <string>

#include "wcprsp/rng.hpp"

namespace wcprsp {

// |+_theta> = (|0> + e^{i theta}|1>)/sqrt(2) with theta = angle * pi/4.
// Global phase is quotiented out.
class PlusState {
 public:
  constexpr PlusState() = default;
  constexpr explicit PlusState(int angle) : angle_(static_cast<std::uint8_t>(((angle % 8) + 8) % 8)) {}

  constexpr int angle() const { return angle_; }

  friend constexpr bool operator==(PlusState, PlusState) = default;

 private:
  std::uint8_t angle_ = 0;
};

// The reference state rho_0 = |+>.
inline constexpr PlusState kReferenceState{};

// Element X^x * Z(k pi/4) of the order-16 group generated by X and Z(pi/4),
// modulo global phase. Closed under the quantum one-time pad.
class GroupElement {
 public:
  constexpr GroupElement() = default;
  constexpr GroupElement(int x_bit, int angle)
      : x_bit_(static_cast<std::uint8_t>(x_bit & 1)),
        angle_(static_cast<std::uint8_t>(((angle % 8) + 8) % 8)) {}

  static constexpr GroupElement identity() { return {}; }
  static constexpr GroupElement pauli_x() { return {1, 0}; }
  static constexpr GroupElement pauli_z() { return {0, 4}; }
  static constexpr GroupElement z_rotation(int angle) { return {0, angle}; }

  // Dense index in [0, 16): x_bit * 8 + angle.
  constexpr int index() const { return x_bit_ * 8 + angle_; }
  static constexpr GroupElement from_index(int index) { return {index / 8, index % 8}; }

  constexpr int x_bit() const { return x_bit_; }
  constexpr int angle() const { return angle_; }

  friend constexpr bool operator==(GroupElement, GroupElement) = default;

 private:
  std::uint8_t x_bit_ = 0;
  std::uint8_t angle_ = 0;
};

inline constexpr int kGroupOrder = 16;

// g * h as operators (h acts first). Uses Z(t) X = X Z(-t) up to phase.
constexpr GroupElement compose(GroupElement g, GroupElement h) {
  const int moved = h.x_bit() ? -g.angle() : g.angle();
  return {g.x_bit() ^ h.x_bit(), moved + h.angle()};
}

constexpr GroupElement inverse(GroupElement g) {
  return {g.x_bit(), g.x_bit() ? g.angle() : -g.angle()};
}

// Z(k pi/4) adds k to the angle; X negates it.
constexpr PlusState act(GroupElement g, PlusState s) {
  const int rotated = s.angle() + g.angle();
  return PlusState(g.x_bit() ? -rotated : rotated);
}

// Uniform ("Haar") distribution on the finite group.
inline GroupElement sample_group_element(RngStream& rng) {
  return GroupElement::from_index(static_cast<int>(rng.uniform_below(kGroupOrder)));
}

std::string to_string(GroupElement g);
std::string to_string(PlusState s);

}  // namespace wcprsp
