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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nmrqc/linalg.hpp"
#include "nmrqc/quantum_state.hpp"

namespace nmrqc {

/// Sign of the exponent in y_k = N^{-1/2} Σ_j x_j exp(±2πi jk/N).
/// `Minus` reproduces the shift-phase examples of the period-finding
/// walkthrough (|1> + |5> -> |0> - i|2> - |4> + i|6>) and is the default.
enum class FourierSign { Plus, Minus };

inline constexpr FourierSign kDefaultFourierSign = FourierSign::Minus;

char to_char(FourierSign sign);

enum class RotationAxis { X, Y, Z, Azimuth };

struct Rotation {
  int spin = 0;
  RotationAxis axis = RotationAxis::X;
  double angle_deg = 0.0;
  /// Only used with RotationAxis::Azimuth: axis in the xy plane.
  double azimuth_deg = 0.0;

  /// Azimuth of the rotation axis in the xy plane (x = 0, y = 90).
  double phase_deg() const;
};

struct Hadamard {
  int spin = 0;
};

struct Cnot {
  int control = 0;
  int target = 1;
};

/// The INEPT propagator: CNOT up to single-spin z phases.
struct Inept {
  int control = 0;
  int target = 1;
};

/// diag(1, 1, 1, e^{iθ}) on (a, b).
struct ControlledPhase {
  int a = 0;
  int b = 1;
  double angle_deg = 0.0;
};

/// Basis permutation on `spins`: local state j goes to map[j]. spins[0] is
/// the most significant bit of the local index.
struct Permutation {
  std::vector<int> spins;
  std::vector<std::size_t> map;
};

struct QftBlock {
  std::vector<int> spins;
  FourierSign sign = kDefaultFourierSign;
};

using Gate = std::variant<Rotation, Hadamard, Cnot, Inept, ControlledPhase,
                          Permutation, QftBlock>;

/// Spins touched by the gate, in the order of its local index.
std::vector<int> gate_spins(const Gate &g);

/// 2^k x 2^k matrix of the gate on its own spins.
Matrix local_matrix(const Gate &g);

/// The gate embedded into n spins. Throws on out-of-range indices.
Matrix gate_matrix(const Gate &g, int n);

void validate_gate(const Gate &g, int n);

class Circuit {
 public:
  explicit Circuit(int qubits);

  int qubits() const { return qubits_; }
  const std::vector<Gate> &gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  Circuit &add(Gate g);
  Circuit &append(const Circuit &other);

 private:
  int qubits_;
  std::vector<Gate> gates_;
};

/// Product of gate matrices, first gate rightmost.
Matrix circuit_unitary(const Circuit &c);

DensityMatrix apply_circuit(const Circuit &c, const DensityMatrix &rho);
Vector apply_circuit(const Circuit &c, const Vector &state);
void apply_gate(const Gate &g, Vector &state, int n);

/// SWAP(a, b) as CNOT(a,b) CNOT(b,a) CNOT(a,b).
void append_swap(Circuit &c, int a, int b);

/// Hadamard + controlled-phase ladder on `spins` (spins[0] most significant)
/// followed by an explicit bit-reversal permutation.
Circuit qft_circuit(const std::vector<int> &spins, FourierSign sign, int n);

/// N x N matrix with entries N^{-1/2} exp(±2πi jk/N). N must be 2^k.
Matrix qft_matrix(std::size_t size, FourierSign sign);

/// Direct O(N^2) evaluation of the discrete Fourier transform definition.
std::vector<Complex> fft_reference(std::span<const Complex> x, FourierSign sign);

/// x -> A x ⊕ b over GF(2) as CNOT and NOT (180° x rotation) gates, when the
/// permutation is affine; nullopt otherwise.
std::optional<std::vector<Gate>> synthesize_affine(const Permutation &p);

bool is_permutation_matrix(const Matrix &u, double tol = 1e-12);

/// Line-oriented text form; see README for the grammar.
void write_circuit(std::ostream &out, const Circuit &c);
Circuit read_circuit(std::istream &in);

}  // namespace nmrqc
