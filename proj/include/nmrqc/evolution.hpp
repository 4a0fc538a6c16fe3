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

#include "nmrqc/pulse_sequence.hpp"
#include "nmrqc/quantum_state.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc {

/// Ideal: a soft pulse becomes an instantaneous selective rotation of its
/// reference spin between two halves of free evolution. Physical: the drive
/// is integrated piecewise-constant alongside the internal Hamiltonian.
enum class PulseModel { Ideal, Physical };
enum class TrajectoryCapture { None, PerEvent };

struct SimOptions {
  bool relaxation = false;
  PulseModel pulse_model = PulseModel::Physical;
  TrajectoryCapture trajectory = TrajectoryCapture::None;
  /// Largest soft-pulse integration step; must resolve 1/20 of the fastest
  /// drive period seen by any spin.
  double step_cap_s = 1e-7;
  HamiltonianModel hamiltonian;
};

/// Running software frames (degrees): frame shifts add, free evolution of
/// duration t subtracts 360 ν_s t.
void advance_frames(const PulseEvent &e, const SpinSystem &sys, std::vector<double> &frames_deg);

/// Spin whose offset is nearest the soft pulse carrier among the spins on its
/// channel (lowest index on ties). Throws if the channel has no spins.
int soft_pulse_reference(const SoftPulse &p, const SpinSystem &sys);

/// Physical propagator of one unitary event given the frames at its start.
/// Crushers are not unitary and throw; frame shifts give the identity.
Matrix event_propagator(const PulseEvent &e, const SpinSystem &sys, const SimOptions &options,
                        const std::vector<double> &frames_deg);

struct SimResult {
  /// Physical (lab-frame bookkeeping) state after the last event.
  DensityMatrix final_state;
  /// State after each event when trajectory capture is on.
  std::vector<DensityMatrix> trajectory;
  std::vector<double> frames_deg;

  /// Z(R) ρ Z(R)†: the state in the software frames, i.e. what the circuit
  /// the sequence implements would produce.
  DensityMatrix logical_state() const;
};

SimResult simulate(const PulseSequence &seq, const DensityMatrix &rho0, const SpinSystem &sys,
                   const SimOptions &options = {});

struct SequencePropagator {
  Matrix physical;
  std::vector<double> frames_deg;
  /// Z(R_final) · physical.
  Matrix logical;
};

/// Product of event propagators. Throws on crushers.
SequencePropagator sequence_propagator(const PulseSequence &seq, const SpinSystem &sys,
                                       const SimOptions &options = {});

/// Converts a physical state to the software frames (or back with -R).
DensityMatrix to_logical(const DensityMatrix &rho, const std::vector<double> &frames_deg);

/// Phenomenological relaxation over `duration_s`: coherences decay with the
/// T2 rates of the flipped spins, z-order terms relax toward the thermal
/// deviation with the summed T1 rates of their spins.
DensityMatrix relax(const DensityMatrix &rho, double duration_s, const SpinSystem &sys);

/// 1 / (2 |J| T2) with T2 the shorter of the pair.
double error_rate(const SpinSystem &sys, std::pair<int, int> pair);
double error_rate(double j_hz, double t2_s);

inline constexpr double kErrorThreshold = 1e-5;

/// True when the rate is at or below the fault-tolerance threshold.
bool threshold_check(double rate, double threshold = kErrorThreshold);

}  // namespace nmrqc
