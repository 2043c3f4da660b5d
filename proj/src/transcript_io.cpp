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

#include "wcprsp/transcript_io.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "wcprsp/errors.hpp"

namespace wcprsp {

using nlohmann::json;

namespace {

json unitary_json(GroupElement g) { return {{"x", g.x_bit()}, {"angle", g.angle()}}; }

GroupElement unitary_from(const json& j) {
  return GroupElement(j.at("x").get<int>(), j.at("angle").get<int>());
}

}  // namespace

void write_transcript_jsonl(const Transcript& tr, std::ostream& out) {
  for (std::size_t i = 0; i < tr.emissions.size(); ++i) {
    const PulseEmission& e = tr.emissions[i];
    json line = {{"msg", "emission"}, {"slot", i}, {"photons", e.photon_count}};
    if (e.leaked_unitary) {
      line["leak"] = unitary_json(*e.leaked_unitary);
    } else if (e.state) {
      line["state"] = e.state->angle();
    }
    out << line.dump() << '\n';
  }
  if (!tr.ack) {
    out << json{{"msg", "ack"}, {"abort", true}}.dump() << '\n';
    return;
  }
  out << json{{"msg", "ack"}, {"indices", *tr.ack}}.dump() << '\n';
  if (!tr.corrections) {
    out << json{{"msg", "corrections"}, {"abort", true}}.dump() << '\n';
    return;
  }
  json unitaries = json::array();
  for (GroupElement g : tr.corrections->unitaries) unitaries.push_back(unitary_json(g));
  out << json{{"msg", "corrections"}, {"sigma", tr.corrections->sigma}, {"unitaries", unitaries}}
             .dump()
      << '\n';
  if (tr.output) {
    json states = json::array();
    for (PlusState s : *tr.output) states.push_back(s.angle());
    out << json{{"msg", "output"}, {"states", states}}.dump() << '\n';
  }
}

Transcript read_transcript_jsonl(std::istream& in) {
  Transcript tr;
  enum class Stage { kEmissions, kAfterAck, kAfterCorrections, kDone } stage = Stage::kEmissions;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) continue;
    json line;
    try {
      line = json::parse(text);
    } catch (const json::exception& e) {
      throw ParameterError("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string msg = line.value("msg", "");
    try {
      if (msg == "emission" && stage == Stage::kEmissions) {
        if (line.at("slot").get<std::size_t>() != tr.emissions.size()) {
          throw ParameterError("emission slots must be consecutive");
        }
        PulseEmission e;
        e.photon_count = line.at("photons").get<std::uint32_t>();
        if (line.contains("leak")) e.leaked_unitary = unitary_from(line["leak"]);
        if (line.contains("state")) e.state = PlusState(line["state"].get<int>());
        tr.emissions.push_back(e);
      } else if (msg == "ack" && stage == Stage::kEmissions) {
        if (line.value("abort", false)) {
          stage = Stage::kDone;
        } else {
          tr.ack = line.at("indices").get<std::vector<std::uint32_t>>();
          stage = Stage::kAfterAck;
        }
      } else if (msg == "corrections" && stage == Stage::kAfterAck) {
        if (line.value("abort", false)) {
          stage = Stage::kDone;
        } else {
          Corrections c;
          c.sigma = line.at("sigma").get<std::vector<std::uint32_t>>();
          for (const json& u : line.at("unitaries")) c.unitaries.push_back(unitary_from(u));
          tr.corrections = std::move(c);
          stage = Stage::kAfterCorrections;
        }
      } else if (msg == "output" && stage == Stage::kAfterCorrections) {
        std::vector<PlusState> states;
        for (const json& s : line.at("states")) states.emplace_back(s.get<int>());
        tr.output = std::move(states);
        stage = Stage::kDone;
      } else {
        throw ParameterError("unexpected message '" + msg + "'");
      }
    } catch (const json::exception& e) {
      throw ParameterError("transcript line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParameterError& e) {
      throw ParameterError("transcript line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tr;
}

}  // namespace wcprsp
