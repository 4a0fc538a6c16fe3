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

#include <cstdint>
#include <string_view>
#include <vector>

#include "nmrqc/gates.hpp"
#include "nmrqc/pulse_sequence.hpp"
#include "nmrqc/quantum_state.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc {

struct TemporalAverage {
  /// One permutation circuit per experiment (CNOT/NOT where affine).
  std::vector<Circuit> circuits;
  /// The underlying population maps: basis state x moves to maps[k][x].
  std::vector<std::vector<std::size_t>> maps;
  /// Σ_k U_k ρ_thermal U_k†, summed in experiment order.
  DensityMatrix combined;
  /// Best-fit c in combined ≈ c · effective_pure_target.
  double scale = 0.0;
  /// ‖combined − scale · target‖_F (zero for equal weights).
  double residual = 0.0;
  /// ⌈(2^n − 1)/n⌉.
  std::size_t lower_bound = 0;
};

/// Temporal averaging toward |s><s| − I/2^n from the thermal deviation with
/// `weights` (the system's thermal weights when empty).
TemporalAverage temporal_average(const SpinSystem &sys, std::size_t target,
                                 std::vector<double> weights = {});

/// The experiment maps alone: x -> A_k x ⊕ b_k over GF(2)^n, all fixing the
/// target's role. For n = 2 these are the three cyclic rotations of the
/// non-ground populations; n = 3 uses three experiments.
std::vector<std::vector<std::size_t>> temporal_maps(int n, std::size_t target);

struct SpatialAverage {
  PulseSequence sequence;
  DensityMatrix input;
  DensityMatrix output;
  /// output = scale · effective_pure_target(2, 0).
  double scale = 0.0;
  double residual = 0.0;
};

/// Built-in two-spin sequence: θ_x on spin 1 with cos θ = w0/(2 w1), crush,
/// 45_x on spin 0, 1/(2J), 45_{-y} on spin 0, crush.
SpatialAverage spatial_average(const SpinSystem &sys, std::vector<double> weights = {});

struct LogicalLabel {
  Circuit circuit;
  std::vector<std::size_t> map;
  DensityMatrix thermal;
  DensityMatrix relabeled;
  int condition_spin = 0;
  int condition_value = 0;
  std::vector<int> subsystem;
  /// Deviation of the conditioned block (trace removed).
  DensityMatrix conditional;
};

/// Three equal-weight spins: rearranges {3a,a,a,−a,a,−a,−a,−3a} into
/// {3a,−a,−a,−a,a,a,a,−3a}; spins 1 and 2 are then effectively pure given
/// spin 0 in |0>.
LogicalLabel logical_label(const SpinSystem &sys);

enum class PrepScheme { Temporal, Spatial, Logical };
PrepScheme parse_scheme(std::string_view name);
std::string_view to_string(PrepScheme scheme);

struct PrepCost {
  /// Signal relative to a pure-state experiment, n / 2^n.
  double signal_scale = 0.0;
  std::size_t experiments = 0;
  /// ⌈(2^n − 1)/n⌉ for temporal averaging, 1 otherwise.
  std::size_t experiment_bound = 1;
};

PrepCost prep_cost(PrepScheme scheme, int n);

/// ⌈k / α²⌉ spins for Schulman-Vazirani cooling.
std::uint64_t sv_spins_needed(double k, double alpha);

}  // namespace nmrqc
