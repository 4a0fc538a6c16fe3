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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nmrqc/linalg.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc {

/// Full states carry unit trace; deviation states hold only the traceless
/// part (the unobservable identity component is dropped).
enum class Representation { Full, Deviation };

std::string_view to_string(Representation rep);

/// Hermitian 2^n x 2^n density matrix with an explicit representation tag.
/// Arithmetic mixing the two tags throws.
class DensityMatrix {
 public:
  /// Validates dimension (power of two, n <= kMaxSpins), Hermiticity and the
  /// trace required by `rep`.
  DensityMatrix(Matrix entries, Representation rep);

  static DensityMatrix pure(const Vector &psi);
  static DensityMatrix basis_state(int n, std::size_t index);
  static DensityMatrix zero_deviation(int n);

  int spins() const { return spins_; }
  Eigen::Index dim() const { return entries_.rows(); }
  Representation representation() const { return rep_; }
  bool is_deviation() const { return rep_ == Representation::Deviation; }
  const Matrix &matrix() const { return entries_; }

  /// Traceless part; identity for deviation states.
  DensityMatrix deviation() const;

  DensityMatrix operator+(const DensityMatrix &other) const;
  DensityMatrix operator-(const DensityMatrix &other) const;
  /// Only defined for deviation states (scaling a full state breaks trace).
  DensityMatrix scaled(double factor) const;

  /// Smallest eigenvalue (positivity check for full states).
  double min_eigenvalue() const;

 private:
  Matrix entries_;
  Representation rep_;
  int spins_;
};

/// Mixture Σ p_k ρ_k of full states (p_k >= 0, Σ p_k = 1).
DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>> &terms);

/// Coefficients over the 4^n product-operator words. Word w with k non-E
/// factors stands for 2^(k-1) ⊗ factors (so "Iz Iz" is 2IzSz); the all-E
/// word is the identity.
class ProductOperatorExpansion {
 public:
  explicit ProductOperatorExpansion(int n);

  int spins() const { return spins_; }
  std::size_t size() const { return coeffs_.size(); }

  double coefficient(std::size_t word) const { return coeffs_.at(word); }
  double coefficient(std::string_view word) const;
  void set(std::size_t word, double value) { coeffs_.at(word) = value; }
  void set(std::string_view word, double value);
  const std::vector<double> &coefficients() const { return coeffs_; }

  /// (word name, coefficient) for |coefficient| > tol, in word order.
  std::vector<std::pair<std::string, double>> terms(double tol = 1e-12) const;

  /// Space-separated factor names, spin 0 first: e.g. "Iz E Iz".
  static std::string word_name(std::size_t word, int n);
  static std::size_t word_index(std::string_view name, int n);
  /// Per-spin factors of a word (spin 0 first).
  static std::vector<SpinAxis> word_factors(std::size_t word, int n);

 private:
  int spins_;
  std::vector<double> coeffs_;
};

/// Diagonal deviation Σ_i w_i 2Iz_i.
DensityMatrix thermal_deviation(int n, const std::vector<double> &weights);
DensityMatrix thermal_deviation(const SpinSystem &sys,
                                const std::vector<double> &weights);

/// (|s><s| - I/2^n): outlier population (2^n-1)/2^n, all others -1/2^n.
DensityMatrix effective_pure_target(int n, std::size_t basis_state);

ProductOperatorExpansion to_product_operators(const DensityMatrix &rho);
DensityMatrix from_product_operators(const ProductOperatorExpansion &poe,
                                     Representation rep);

/// Tr(ρ O).
Complex expectation(const DensityMatrix &rho, const Matrix &op);

/// Zeroes every element whose coherence order is not in `keep_orders`.
/// `keep_orders` must be closed under negation.
DensityMatrix coherence_order_filter(const DensityMatrix &rho,
                                     const std::set<int> &keep_orders);

/// Coherence order of element (r, c): Σ bits(c) - Σ bits(r).
int coherence_order(std::size_t row, std::size_t col);

struct StateDistance {
  double trace_distance = 0.0;
  /// Uhlmann fidelity for full states; normalised overlap
  /// Tr(ρ1ρ2)/sqrt(Tr ρ1² Tr ρ2²) for deviation states.
  double fidelity = 0.0;
};

StateDistance distance(const DensityMatrix &a, const DensityMatrix &b);

/// U ρ U†.
DensityMatrix apply_unitary(const Matrix &u, const DensityMatrix &rho);

/// Text format:
///   dim <N>
///   representation full|deviation
///   N lines of 2N numbers (re im pairs), row by row.
void write_density_matrix(std::ostream &out, const DensityMatrix &rho);
DensityMatrix read_density_matrix(std::istream &in);

}  // namespace nmrqc
