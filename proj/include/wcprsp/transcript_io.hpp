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

#include <iosfwd>

#include "wcprsp/protocol.hpp"

namespace wcprsp {

// Line-delimited JSON, one message per line, in message order:
//
//   {"msg":"emission","slot":3,"photons":1,"state":5}
//   {"msg":"emission","slot":4,"photons":3,"leak":{"x":1,"angle":2}}
//   {"msg":"ack","indices":[0,3,...]}            or {"msg":"ack","abort":true}
//   {"msg":"corrections","sigma":[...],"unitaries":[{"x":0,"angle":7},...]}
//                                                or {"msg":"corrections","abort":true}
//   {"msg":"output","states":[0,5,...]}
//
// Slots, indices and sigma are 0-based. "state" is the angle index k of
// |+_{k pi/4}> and is absent for vacuum pulses.
void write_transcript_jsonl(const Transcript& transcript, std::ostream& out);

// Inverse of write_transcript_jsonl. Throws ParameterError on malformed
// input or out-of-order messages.
Transcript read_transcript_jsonl(std::istream& in);

}  // namespace wcprsp
