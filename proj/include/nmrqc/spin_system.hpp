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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmrqc/linalg.hpp"

namespace nmrqc {

/// One spin-1/2 nucleus. Offsets are Hz in the spin's own rotating frame.
struct Spin {
  std::string label;
  double offset_hz = 0.0;
  std::string channel;
  std::optional<double> t1_s;
  std::optional<double> t2_s;
  /// Equilibrium polarisation (ground minus excited probability) of the
  /// spin on its own; roughly 1e-5 at room temperature.
  double polarization = 1e-5;
};

enum class CouplingMode { Weak, Strong };

struct HamiltonianModel {
  CouplingMode mode = CouplingMode::Weak;
};

/// Immutable molecule model: spins, J couplings and relaxation times.
class SpinSystem {
 public:
  /// Validates the invariants: 1 <= n <= kMaxSpins, symmetric J with zero
  /// diagonal, positive relaxation times and T2 <= 2 T1.
  SpinSystem(std::vector<Spin> spins, Eigen::MatrixXd j_hz);

  int size() const { return static_cast<int>(spins_.size()); }
  const Spin &spin(int i) const { return spins_.at(static_cast<std::size_t>(i)); }
  const std::vector<Spin> &spins() const { return spins_; }
  double offset_hz(int i) const { return spin(i).offset_hz; }
  double coupling_hz(int i, int j) const { return j_hz_(i, j); }
  const Eigen::MatrixXd &couplings() const { return j_hz_; }

  /// Pairs (i, j), i < j, with nonzero coupling, in lexicographic order.
  std::vector<std::pair<int, int>> coupling_graph() const;
  /// Directly coupled spins of `i`, ascending.
  std::vector<int> neighbors(int i) const;
  /// Spins assigned to `channel`, ascending.
  std::vector<int> spins_on_channel(std::string_view channel) const;
  /// True when every spin carries T1 and T2.
  bool has_relaxation() const;
  /// Per-spin thermal deviation weights w_i = polarization_i / 2^n.
  std::vector<double> thermal_weights() const;
  std::optional<int> index_of(std::string_view label) const;

  /// System whose spin k is this system's spin perm[k].
  SpinSystem relabeled(const std::vector<int> &perm) const;

 private:
  std::vector<Spin> spins_;
  Eigen::MatrixXd j_hz_;
};

/// Parses the JSON molecule description (see README for the schema).
SpinSystem load_system(std::string_view json_text);
SpinSystem load_system_file(const std::filesystem::path &path);

/// H/ħ in rad/s: Σ 2πν_i Iz_i + Σ_{i<j} 2πJ_ij Iz_i Iz_j, plus the
/// transverse 2πJ_ij (Ix Ix + Iy Iy) terms in strong-coupling mode.
Matrix internal_hamiltonian(const SpinSystem &sys, HamiltonianModel model = {});

struct MultipletLine {
  double frequency_hz = 0.0;
  /// Bits of the other spins in ascending spin order (0 = |0>, 1 = |1>).
  std::vector<int> neighbor_bits;
  /// neighbor_bits as a string, e.g. "01"; empty for a single spin.
  std::string label;
};

/// Weak-coupling multiplet of `spin`: 2^(n-1) lines, one per configuration
/// of the other spins, enumerated in binary order of the label.
std::vector<MultipletLine> multiplet_lines(const SpinSystem &sys, int spin);

}  // namespace nmrqc
