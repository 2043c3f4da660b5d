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

#include "wcprsp/protocol.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "wcprsp/distributions.hpp"
#include "wcprsp/errors.hpp"

namespace wcprsp {

namespace {

constexpr std::uint64_t kSenderStream = 1;
constexpr std::uint64_t kSourceStream = 2;
constexpr std::uint64_t kReceiverStream = 3;

std::vector<std::uint32_t> validated_ack(std::vector<std::uint32_t> ack, std::uint32_t n_pulses,
                                         std::uint32_t batch_size) {
  if (ack.size() != batch_size) {
    throw ProtocolViolation("acknowledgement has " + std::to_string(ack.size()) +
                            " indices, expected K=" + std::to_string(batch_size));
  }
  std::sort(ack.begin(), ack.end());
  if (std::adjacent_find(ack.begin(), ack.end()) != ack.end()) {
    throw ProtocolViolation("acknowledgement repeats a slot index");
  }
  if (!ack.empty() && ack.back() >= n_pulses) {
    throw ProtocolViolation("acknowledgement index " + std::to_string(ack.back()) +
                            " outside [0, " + std::to_string(n_pulses) + ")");
  }
  return ack;
}

std::vector<PlusState> undo_relabeling(const Corrections& corrections,
                                       const std::vector<PlusState>& kept) {
  if (corrections.unitaries.size() != kept.size() || corrections.sigma.size() != kept.size()) {
    throw ProtocolViolation("corrections do not match the number of kept states");
  }
  std::vector<PlusState> out(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    out[corrections.sigma[j]] = act(corrections.unitaries[j], kept[j]);
  }
  return out;
}

}  // namespace

const char* to_string(RunOutcome o) {
  switch (o) {
    case RunOutcome::kCompleted:
      return "Completed";
    case RunOutcome::kReceiverAbort:
      return "ReceiverAbort";
    case RunOutcome::kEstimationAbort:
      return "EstimationAbort";
  }
  return "?";
}

RunOutcome Transcript::outcome() const {
  if (!ack) return RunOutcome::kReceiverAbort;
  if (!corrections) return RunOutcome::kEstimationAbort;
  return RunOutcome::kCompleted;
}

std::optional<std::vector<std::uint32_t>> HonestReceiver::acknowledge(
    std::span<const PulseEmission> emissions, std::uint32_t batch_size, RngStream& rng) {
  std::vector<std::uint32_t> non_empty;
  for (std::uint32_t i = 0; i < emissions.size(); ++i) {
    if (emissions[i].photon_count >= 1) non_empty.push_back(i);
  }
  if (non_empty.size() < batch_size) return std::nullopt;
  std::vector<std::uint32_t> chosen = random_subset(non_empty, batch_size, rng);
  kept_.clear();
  // One photon per kept pulse; extra photons are discarded unread.
  for (std::uint32_t i : chosen) kept_.push_back(*emissions[i].state);
  return chosen;
}

std::optional<std::vector<PlusState>> HonestReceiver::correct(const Corrections& corrections) {
  return undo_relabeling(corrections, kept_);
}

std::optional<std::vector<std::uint32_t>> FirstNonEmptyReceiver::acknowledge(
    std::span<const PulseEmission> emissions, std::uint32_t batch_size, RngStream&) {
  std::vector<std::uint32_t> chosen;
  kept_.clear();
  for (std::uint32_t i = 0; i < emissions.size() && chosen.size() < batch_size; ++i) {
    if (emissions[i].photon_count >= 1) {
      chosen.push_back(i);
      kept_.push_back(*emissions[i].state);
    }
  }
  if (chosen.size() < batch_size) return std::nullopt;
  return chosen;
}

std::optional<std::vector<PlusState>> FirstNonEmptyReceiver::correct(
    const Corrections& corrections) {
  return undo_relabeling(corrections, kept_);
}

std::optional<std::vector<std::uint32_t>> PnsReceiver::acknowledge(
    std::span<const PulseEmission> emissions, std::uint32_t batch_size, RngStream& rng) {
  std::map<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> by_count;
  for (std::uint32_t i = 0; i < emissions.size(); ++i) {
    if (emissions[i].photon_count >= 2) by_count[emissions[i].photon_count].push_back(i);
  }
  std::vector<std::uint32_t> chosen;
  for (auto& [count, slots] : by_count) {
    const auto room = static_cast<std::uint32_t>(batch_size - chosen.size());
    if (room == 0) break;
    if (slots.size() <= room) {
      chosen.insert(chosen.end(), slots.begin(), slots.end());
    } else {
      const auto pick = random_subset(slots, room, rng);
      chosen.insert(chosen.end(), pick.begin(), pick.end());
    }
  }
  if (chosen.size() < batch_size) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  leaked_.clear();
  for (std::uint32_t i : chosen) leaked_.push_back(*emissions[i].leaked_unitary);
  return chosen;
}

std::optional<std::vector<PlusState>> PnsReceiver::correct(const Corrections& corrections) {
  // Every kept pulse leaked its pad, so the final states are known exactly.
  std::vector<PlusState> kept;
  kept.reserve(leaked_.size());
  for (GroupElement g : leaked_) kept.push_back(act(g, kReferenceState));
  return undo_relabeling(corrections, kept);
}

ProtocolRun run_with_receiver(const ProtocolParams& params,
                              std::span<const GroupElement> targets,
                              const EstimationAlgorithm& estimation, Receiver& receiver,
                              const RngStream& rng) {
  if (targets.size() != params.batch_size) {
    throw ParameterError("protocol: expected K=" + std::to_string(params.batch_size) +
                         " target unitaries, got " + std::to_string(targets.size()));
  }
  RngStream sender_rng = rng.split(kSenderStream);
  RngStream source_rng = rng.split(kSourceStream);
  RngStream receiver_rng = rng.split(kReceiverStream);

  ProtocolRun run;
  SenderState& s = run.sender;
  Transcript& tr = run.transcript;
  const std::uint32_t n = params.n_pulses;

  // Sender - sending WCP.
  s.slot_to_original = random_permutation(n, sender_rng);
  s.pad.reserve(n);
  tr.emissions.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    s.pad.push_back(sample_group_element(sender_rng));
    tr.emissions.push_back(wcp_emit(s.pad[i], params.intensities[s.slot_to_original[i]],
                                    params.eta, receiver.malicious(), source_rng));
  }

  // Receiver - acknowledging reception.
  auto ack = receiver.acknowledge(tr.emissions, params.batch_size, receiver_rng);
  if (!ack) return run;
  tr.ack = validated_ack(std::move(*ack), n, params.batch_size);

  // Sender - estimation.
  s.accepted_original.reserve(tr.ack->size());
  for (std::uint32_t slot : *tr.ack) s.accepted_original.push_back(s.slot_to_original[slot]);
  std::sort(s.accepted_original.begin(), s.accepted_original.end());
  s.estimation = estimation.decide(s.accepted_original, params.labels);
  if (*s.estimation == Decision::kAbort) return run;

  s.sigma = random_permutation(params.batch_size, sender_rng);
  Corrections corr;
  corr.sigma = s.sigma;
  corr.unitaries.reserve(params.batch_size);
  for (std::uint32_t j = 0; j < params.batch_size; ++j) {
    corr.unitaries.push_back(compose(targets[s.sigma[j]], inverse(s.pad[(*tr.ack)[j]])));
  }
  tr.corrections = corr;

  // Receiver - corrections.
  tr.output = receiver.correct(*tr.corrections);
  return run;
}

ProtocolRun run_honest(const ProtocolParams& params, std::span<const GroupElement> targets,
                       const EstimationAlgorithm& estimation, const RngStream& rng) {
  HonestReceiver receiver;
  return run_with_receiver(params, targets, estimation, receiver, rng);
}

std::vector<PlusState> ideal_batch(std::span<const GroupElement> targets) {
  std::vector<PlusState> out;
  out.reserve(targets.size());
  for (GroupElement g : targets) out.push_back(act(g, kReferenceState));
  return out;
}

bool receiver_cheated(const ProtocolRun& run) {
  const Transcript& tr = run.transcript;
  if (tr.outcome() != RunOutcome::kCompleted) return false;
  return std::all_of(tr.ack->begin(), tr.ack->end(), [&](std::uint32_t slot) {
    return tr.emissions[slot].photon_count >= 2;
  });
}

}  // namespace wcprsp
