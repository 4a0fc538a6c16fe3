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

#include "nmrqc/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace nmrqc {

Eigen::Matrix2cd single_spin_operator(SpinAxis axis) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case SpinAxis::E:
      m << 1.0, 0.0, 0.0, 1.0;
      break;
    case SpinAxis::X:
      m << 0.0, 0.5, 0.5, 0.0;
      break;
    case SpinAxis::Y:
      m << 0.0, -0.5 * i, 0.5 * i, 0.0;
      break;
    case SpinAxis::Z:
      m << 0.5, 0.0, 0.0, -0.5;
      break;
  }
  return m;
}

Matrix kron(const Matrix &a, const Matrix &b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Matrix spin_operator(SpinAxis axis, int spin, int n) {
  const Eigen::Matrix2cd op = single_spin_operator(axis);
  const std::size_t dim = std::size_t{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  const int pos = bit_position(spin, n);
  for (std::size_t c = 0; c < dim; ++c) {
    const int bc = static_cast<int>((c >> pos) & 1u);
    for (int br = 0; br < 2; ++br) {
      const Complex v = op(br, bc);
      if (v == Complex(0.0)) continue;
      const std::size_t r = (c & ~(std::size_t{1} << pos)) |
                            (static_cast<std::size_t>(br) << pos);
      out(r, c) = v;
    }
  }
  return out;
}

Matrix raising_operator(int spin, int n) {
  return spin_operator(SpinAxis::X, spin, n) +
         Complex(0.0, 1.0) * spin_operator(SpinAxis::Y, spin, n);
}

bool is_diagonal(const Matrix &m, double tol) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (r != c && std::abs(m(r, c)) > tol) return false;
  return true;
}

Matrix propagator(const Matrix &hamiltonian, double t) {
  const Eigen::Index dim = hamiltonian.rows();
  if (is_diagonal(hamiltonian)) {
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      u(k, k) = std::exp(Complex(0.0, -hamiltonian(k, k).real() * t));
    return u;
  }
  const Matrix generator = Complex(0.0, -t) * hamiltonian;
  return generator.exp();
}

Matrix pulse_rotation(std::span<const int> spins, double angle_deg,
                      double phase_deg, int n) {
  const double theta = deg_to_rad(angle_deg);
  const double phi = deg_to_rad(phase_deg);
  // exp(-i θ (cos φ σx + sin φ σy)/2) on each spin; the factors commute.
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex i(0.0, 1.0);
  Matrix local(2, 2);
  local << c, -i * s * std::exp(-i * phi), -i * s * std::exp(i * phi), c;
  const std::size_t dim = std::size_t{1} << n;
  Vector column(dim);
  Matrix out(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    column.setZero();
    column(k) = 1.0;
    for (int spin : spins) {
      const int one[1] = {spin};
      apply_local(column, local, one, n);
    }
    out.col(k) = column;
  }
  return out;
}

Matrix z_rotations(std::span<const double> angles_deg, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double phase = 0.0;
    for (int s = 0; s < n && s < static_cast<int>(angles_deg.size()); ++s) {
      const double m = spin_bit(k, s, n) == 0 ? 0.5 : -0.5;
      phase -= deg_to_rad(angles_deg[s]) * m;
    }
    out(k, k) = std::exp(Complex(0.0, phase));
  }
  return out;
}

double phase_aligned_distance(const Matrix &a, const Matrix &b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a - phase * b).norm();
}

double unitarity_error(const Matrix &u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm();
}

double hermiticity_error(const Matrix &h) { return (h - h.adjoint()).norm(); }

Matrix conjugate(const Matrix &u, const Matrix &x) {
  return u * x * u.adjoint();
}

std::size_t local_index(std::size_t index, std::span<const int> spins, int n) {
  std::size_t out = 0;
  for (int s : spins) out = (out << 1) | static_cast<std::size_t>(spin_bit(index, s, n));
  return out;
}

std::size_t with_local_index(std::size_t index, std::size_t value,
                             std::span<const int> spins, int n) {
  const std::size_t k = spins.size();
  for (std::size_t j = 0; j < k; ++j) {
    const int pos = bit_position(spins[j], n);
    const std::size_t bit = (value >> (k - 1 - j)) & 1u;
    index = (index & ~(std::size_t{1} << pos)) | (bit << pos);
  }
  return index;
}

void apply_local(Vector &state, const Matrix &local, std::span<const int> spins,
                 int n) {
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t ldim = std::size_t{1} << spins.size();
  std::size_t mask = 0;
  for (int s : spins) mask |= std::size_t{1} << bit_position(s, n);
  std::vector<std::size_t> idx(ldim);
  Vector in(ldim);
  for (std::size_t base = 0; base < dim; ++base) {
    if (base & mask) continue;
    for (std::size_t l = 0; l < ldim; ++l) {
      idx[l] = with_local_index(base, l, spins, n);
      in(l) = state(idx[l]);
    }
    const Vector out = local * in;
    for (std::size_t l = 0; l < ldim; ++l) state(idx[l]) = out(l);
  }
}

void apply_local_permutation(Vector &state, std::span<const std::size_t> map,
                             std::span<const int> spins, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Vector out(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const std::size_t l = local_index(k, spins, n);
    out(with_local_index(k, map[l], spins, n)) = state(k);
  }
  state = std::move(out);
}

}  // namespace nmrqc
