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

#include <utility>
#include <vector>

#include "nmrqc/gates.hpp"
#include "nmrqc/pulse_sequence.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc {

struct CompileOptions {
  /// Route two-spin gates on uncoupled pairs through SWAP chains.
  bool route = true;
  /// Insert Hadamard-schedule echoes on spectator spins during J delays.
  bool refocus = true;
};

/// Pulse sequence for one gate. Two-spin gates require a direct coupling.
PulseSequence compile_gate(const Gate &g, const SpinSystem &sys, const CompileOptions &options = {});

/// Concatenated gate sequences with the final frame report attached.
PulseSequence compile_circuit(const Circuit &c, const SpinSystem &sys, const CompileOptions &options = {});

/// Free evolution of `delay_s` in which only the active pair's coupling
/// survives: π pulses on the spectators follow rows 1.. of a Sylvester
/// Hadamard matrix over 2^m equal segments.
PulseSequence refocus(double delay_s, std::pair<int, int> active_pair, const SpinSystem &sys);

/// SWAP chain along the shortest coupling path (neighbours ascending), the
/// gate on the last edge, then the swaps undone.
Circuit route_gate(const Gate &g, const SpinSystem &sys);
Circuit route_cnot(int control, int target, const SpinSystem &sys);

/// Shortest coupling-graph path, lowest indices on ties; throws if none.
std::vector<int> coupling_path(int from, int to, const SpinSystem &sys);

/// Second-order Bloch-Siegert phase (degrees) of a spectator at
/// `spectator_offset_hz` during a constant soft pulse: ω1² T / (2 Δω),
/// positive when the spectator lies above the carrier.
double bloch_siegert_phase(const SoftPulse &p, double spectator_offset_hz);

/// Inserts, after every soft pulse, frame shifts cancelling the predicted
/// Bloch-Siegert phase of the other spins on that channel.
PulseSequence compensate(const PulseSequence &seq, const SpinSystem &sys);

/// Running frames at the end of the sequence (frame shifts and offsets).
std::vector<double> track_frames(const PulseSequence &seq, const SpinSystem &sys);

}  // namespace nmrqc
