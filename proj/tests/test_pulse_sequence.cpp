// Copyright 2026 The nmrqc Authors
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

#include <gtest/gtest.h>

#include <sstream>

#include "nmrqc/error.hpp"
#include "nmrqc/pulse_sequence.hpp"

using namespace nmrqc;

TEST(PulseSequence, DurationAndValidation) {
  PulseSequence seq(2);
  seq.add(HardPulse{{0, 1}, 90, 0}).add(Delay{0.25}).add(SoftPulse{"1H", 10, 500, 0.01, 90});
  seq.add(FrameShift{1, 30}).add(Crusher{});
  EXPECT_DOUBLE_EQ(seq.duration(), 0.26);
  EXPECT_THROW(seq.add(Delay{-1.0}), Error);
  EXPECT_THROW(seq.add(HardPulse{{2}, 90, 0}), Error);
  EXPECT_THROW(seq.add(FrameShift{-1, 0}), Error);
  EXPECT_EQ(event_duration(PulseEvent{FrameShift{0, 10}}), 0.0);
}

TEST(PulseSequence, TextRoundTripIsExact) {
  PulseSequence seq(3);
  seq.add(HardPulse{{0, 2}, 90, 1.0 / 3.0}).add(Delay{1.0 / 430.0}).add(SoftPulse{"13C", 501.5, 1234.5, 1e-3, -90});
  seq.add(FrameShift{1, -0.1}).add(Crusher{});
  seq.set_frames_deg({1.0 / 7.0, -2.5, 359.9});
  std::stringstream ss;
  write_sequence(ss, seq);
  const PulseSequence back = read_sequence(ss);
  std::stringstream again;
  write_sequence(again, back);
  EXPECT_EQ(ss.str(), again.str());
  EXPECT_EQ(back.size(), seq.size());
  EXPECT_EQ(back.frames_deg(), seq.frames_deg());
  EXPECT_EQ(std::get<Delay>(back.events()[1]).duration_s, 1.0 / 430.0);
}

TEST(PulseSequence, ParseErrors) {
  std::stringstream missing_unit("SPINS 1\nDELAY 0.5\n");
  EXPECT_THROW(read_sequence(missing_unit), Error);
  std::stringstream unknown("SPINS 1\nZAP 3\n");
  EXPECT_THROW(read_sequence(unknown), Error);
}
