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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace nmrqc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr int kMaxSpins = 12;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Single-spin operator selector: identity or one of the Cartesian
/// spin-1/2 operators (Ix = σx/2 and so on).
enum class SpinAxis { E, X, Y, Z };

// Basis ordering: |b_0 b_1 ... b_{n-1}> with spin 0 the most significant bit.
inline int bit_position(int spin, int n) { return n - 1 - spin; }
inline int spin_bit(std::size_t index, int spin, int n) {
  return static_cast<int>((index >> bit_position(spin, n)) & 1u);
}

Eigen::Matrix2cd single_spin_operator(SpinAxis axis);

/// Embeds a single-spin operator acting on `spin` into the n-spin space.
Matrix spin_operator(SpinAxis axis, int spin, int n);

/// Raising operator I+ = Ix + i Iy on `spin`.
Matrix raising_operator(int spin, int n);

Matrix kron(const Matrix &a, const Matrix &b);

/// exp(-i H t) for Hermitian H. Diagonal H is exponentiated entrywise;
/// otherwise scaling and squaring (Eigen MatrixFunctions) is used.
Matrix propagator(const Matrix &hamiltonian, double t);

bool is_diagonal(const Matrix &m, double tol = 0.0);

/// Ideal rotation exp(-i θ Σ_s (Ix cos φ + Iy sin φ)) over the listed spins.
Matrix pulse_rotation(std::span<const int> spins, double angle_deg,
                      double phase_deg, int n);

/// Product of per-spin z rotations exp(-i θ_s Iz_s); angles in degrees.
Matrix z_rotations(std::span<const double> angles_deg, int n);

/// Frobenius distance between `a` and `b` minimised over a global phase.
double phase_aligned_distance(const Matrix &a, const Matrix &b);

/// ‖U†U − I‖_F
double unitarity_error(const Matrix &u);

/// ‖H − H†‖_F
double hermiticity_error(const Matrix &h);

/// U X U†
Matrix conjugate(const Matrix &u, const Matrix &x);

/// Applies a k-spin local matrix to a state vector in place, without
/// building the full 2^n operator.
void apply_local(Vector &state, const Matrix &local, std::span<const int> spins,
                 int n);

/// Applies a basis permutation (local index -> local index) on `spins`.
void apply_local_permutation(Vector &state, std::span<const std::size_t> map,
                             std::span<const int> spins, int n);

/// Local index of the sub-register `spins` inside the full basis index.
std::size_t local_index(std::size_t index, std::span<const int> spins, int n);

/// Returns `index` with the sub-register `spins` overwritten by `value`.
std::size_t with_local_index(std::size_t index, std::size_t value,
                             std::span<const int> spins, int n);

}  // namespace nmrqc
