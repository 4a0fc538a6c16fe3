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

#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace nmrqc {

/// Ideal zero-duration rotation about an axis in the xy plane. The phase is
/// the logical (software-frame) phase; the spectrometer adds the frame.
struct HardPulse {
  std::vector<int> spins;
  double angle_deg = 0.0;
  double phase_deg = 0.0;
};

/// Constant-amplitude pulse on one transmitter channel.
struct SoftPulse {
  std::string channel;
  double carrier_hz = 0.0;
  double amplitude_hz = 0.0;
  double duration_s = 0.0;
  double phase_deg = 0.0;
};

struct Delay {
  double duration_s = 0.0;
};

/// Ideal gradient crusher: keeps only zero-quantum coherences.
struct Crusher {};

/// Software z rotation of one spin's frame; no physical evolution.
struct FrameShift {
  int spin = 0;
  double phase_deg = 0.0;
};

using PulseEvent = std::variant<HardPulse, SoftPulse, Delay, Crusher, FrameShift>;

double event_duration(const PulseEvent &e);

class PulseSequence {
 public:
  explicit PulseSequence(int spins);

  int spins() const { return spins_; }
  const std::vector<PulseEvent> &events() const { return events_; }
  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }
  double duration() const;

  /// Throws on negative durations or spin indices out of range.
  PulseSequence &add(PulseEvent e);
  PulseSequence &append(const PulseSequence &other);

  /// Final per-spin frame phases reported by the compiler (degrees).
  const std::vector<double> &frames_deg() const { return frames_; }
  void set_frames_deg(std::vector<double> frames);

 private:
  int spins_;
  std::vector<PulseEvent> events_;
  std::vector<double> frames_;
};

/// One event per line:
///   SPINS n
///   HARD <spin,spin,...> <angle>deg <phase>deg
///   SOFT <channel> <carrier>Hz <amplitude>Hz <duration>s <phase>deg
///   DELAY <duration>s
///   CRUSH
///   FRAME <spin> <phase>deg
///   FRAMES <phase>deg ...   (trailing frame report)
/// Numbers are written with 17 significant digits so reading back is exact.
void write_sequence(std::ostream &out, const PulseSequence &seq);
PulseSequence read_sequence(std::istream &in);

}  // namespace nmrqc
