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
#include <span>
#include <vector>

#include "wcprsp/estimation.hpp"
#include "wcprsp/group.hpp"
#include "wcprsp/params.hpp"
#include "wcprsp/rng.hpp"
#include "wcprsp/wcp_generator.hpp"

namespace wcprsp {

// Sender -> receiver correction message. Entry j (0-based, in the order of
// the sorted acknowledged slots) is U_{sigma(j)} * U'_j^dagger.
struct Corrections {
  std::vector<std::uint32_t> sigma;
  std::vector<GroupElement> unitaries;

  friend bool operator==(const Corrections&, const Corrections&) = default;
};

enum class RunOutcome {
  kCompleted,       // output delivered
  kReceiverAbort,   // receiver saw fewer than K non-empty pulses
  kEstimationAbort  // sender's estimation rejected the acknowledgement
};

const char* to_string(RunOutcome o);

// Classical message history of one protocol execution, in message order:
// emissions -> ack -> corrections -> output. An Abort ends the record; the
// later fields stay empty.
struct Transcript {
  std::vector<PulseEmission> emissions;                 // indexed by transmission slot
  std::optional<std::vector<std::uint32_t>> ack;         // I', sorted; empty = Abort
  std::optional<Corrections> corrections;                // empty = Abort / not reached
  std::optional<std::vector<PlusState>> output;          // receiver's K states

  RunOutcome outcome() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Sender secrets. Never serialized into the transcript.
struct SenderState {
  std::vector<std::uint32_t> slot_to_original;  // pi: slot i carries intensity mu_{pi(i)}
  std::vector<GroupElement> pad;                 // U'_i per slot
  std::vector<std::uint32_t> sigma;              // relabeling over [0, K)
  std::vector<std::uint32_t> accepted_original;  // I = pi(I'), sorted
  std::optional<Decision> estimation;
};

struct ProtocolRun {
  Transcript transcript;
  SenderState sender;
};

// The receiving party. A fresh object is used per run; implementations may
// keep state between acknowledge() and correct().
class Receiver {
 public:
  virtual ~Receiver() = default;

  // Flag c of the source: true removes channel loss and leaks multiphoton
  // pulses classically.
  virtual bool malicious() const = 0;

  // I' (slot indices, distinct) or std::nullopt for Abort.
  virtual std::optional<std::vector<std::uint32_t>> acknowledge(
      std::span<const PulseEmission> emissions, std::uint32_t batch_size, RngStream& rng) = 0;

  // Apply corrections; returns the receiver's output states, if it has any.
  virtual std::optional<std::vector<PlusState>> correct(const Corrections& corrections) = 0;
};

// Follows the protocol: keeps a uniform K-subset of the non-empty pulses and
// one photon from each.
class HonestReceiver final : public Receiver {
 public:
  bool malicious() const override { return false; }
  std::optional<std::vector<std::uint32_t>> acknowledge(std::span<const PulseEmission> emissions,
                                                        std::uint32_t batch_size,
                                                        RngStream& rng) override;
  std::optional<std::vector<PlusState>> correct(const Corrections& corrections) override;

 private:
  std::vector<PlusState> kept_;
};

// Honest channel, but deterministically acknowledges the first K non-empty
// pulses.
class FirstNonEmptyReceiver final : public Receiver {
 public:
  bool malicious() const override { return false; }
  std::optional<std::vector<std::uint32_t>> acknowledge(std::span<const PulseEmission> emissions,
                                                        std::uint32_t batch_size,
                                                        RngStream& rng) override;
  std::optional<std::vector<PlusState>> correct(const Corrections& corrections) override;

 private:
  std::vector<PlusState> kept_;
};

// Photon-number-splitting receiver: lossless channel, acknowledges only
// multiphoton pulses, highest photon number first (uniform within a photon
// number). Aborts when fewer than K multiphoton pulses arrive.
class PnsReceiver final : public Receiver {
 public:
  bool malicious() const override { return true; }
  std::optional<std::vector<std::uint32_t>> acknowledge(std::span<const PulseEmission> emissions,
                                                        std::uint32_t batch_size,
                                                        RngStream& rng) override;
  std::optional<std::vector<PlusState>> correct(const Corrections& corrections) override;

 private:
  std::vector<GroupElement> leaked_;
};

// Replays a fixed acknowledgement regardless of what it receives.
class ScriptedReceiver final : public Receiver {
 public:
  ScriptedReceiver(bool malicious, std::optional<std::vector<std::uint32_t>> ack)
      : malicious_(malicious), ack_(std::move(ack)) {}
  bool malicious() const override { return malicious_; }
  std::optional<std::vector<std::uint32_t>> acknowledge(std::span<const PulseEmission>,
                                                        std::uint32_t, RngStream&) override {
    return ack_;
  }
  std::optional<std::vector<PlusState>> correct(const Corrections&) override {
    return std::nullopt;
  }

 private:
  bool malicious_;
  std::optional<std::vector<std::uint32_t>> ack_;
};

// Runs the full protocol with the given receiver. The sender, source and
// receiver draw from rng.split(1), rng.split(2) and rng.split(3)
// respectively, so the sender's behaviour depends on the receiver only
// through I'. Throws ProtocolViolation if the receiver's acknowledgement is
// malformed (wrong size, repeated or out-of-range slots).
ProtocolRun run_with_receiver(const ProtocolParams& params,
                              std::span<const GroupElement> targets,
                              const EstimationAlgorithm& estimation, Receiver& receiver,
                              const RngStream& rng);

ProtocolRun run_honest(const ProtocolParams& params, std::span<const GroupElement> targets,
                       const EstimationAlgorithm& estimation, const RngStream& rng);

// The ideal batch resource: states[j] = U_j(rho_0).
std::vector<PlusState> ideal_batch(std::span<const GroupElement> targets);

// True when the estimation accepted and every acknowledged pulse carried two
// or more photons, i.e. the receiver holds a classical description of every
// state in the batch.
bool receiver_cheated(const ProtocolRun& run);

}  // namespace wcprsp
