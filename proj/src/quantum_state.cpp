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

#include "nmrqc/quantum_state.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "nmrqc/error.hpp"

namespace nmrqc {

namespace {

constexpr double kHermitianTol = 1e-8;
constexpr double kTraceTol = 1e-8;

int spins_for_dim(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw Error("invalid_state", "density matrix dimension must be 2^n, n >= 1");
  const int n = std::countr_zero(static_cast<unsigned long long>(dim));
  if (n > kMaxSpins)
    throw Error("too_many_spins", "at most " + std::to_string(kMaxSpins) +
                                      " spins are supported");
  return n;
}

void require_same_tag(const DensityMatrix &a, const DensityMatrix &b) {
  if (a.representation() != b.representation())
    throw Error("representation_mismatch",
                "cannot combine full and deviation density matrices");
  if (a.dim() != b.dim())
    throw Error("dimension_mismatch", "density matrices differ in dimension");
}

std::size_t pow4(int k) { return std::size_t{1} << (2 * k); }

// Applies a 4x4 map along the base-4 digit of `spin` of a tensor of 4^n
// entries (spin 0 is the most significant digit).
void transform_axis(std::vector<Complex> &t, int spin, int n,
                    const Eigen::Matrix4cd &map) {
  const std::size_t stride = pow4(n - 1 - spin);
  const std::size_t block = stride * 4;
  for (std::size_t base = 0; base < t.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      Eigen::Vector4cd v;
      for (int d = 0; d < 4; ++d) v(d) = t[base + off + d * stride];
      const Eigen::Vector4cd w = map * v;
      for (int d = 0; d < 4; ++d) t[base + off + d * stride] = w(d);
    }
  }
}

// Tensor position of element (r, c): digit 2*r_i + c_i per spin.
std::size_t tensor_index(std::size_t r, std::size_t c, int n) {
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    idx = idx * 4 + static_cast<std::size_t>(2 * spin_bit(r, i, n) + spin_bit(c, i, n));
  return idx;
}

int nonidentity_factors(std::size_t word, int n) {
  int k = 0;
  for (int i = 0; i < n; ++i, word >>= 2)
    if ((word & 3u) != 0) ++k;
  return k;
}

constexpr const char *kFactorNames[4] = {"E", "Ix", "Iy", "Iz"};

}  // namespace

std::string_view to_string(Representation rep) {
  return rep == Representation::Full ? "full" : "deviation";
}

DensityMatrix::DensityMatrix(Matrix entries, Representation rep)
    : entries_(std::move(entries)), rep_(rep), spins_(0) {
  if (entries_.rows() != entries_.cols())
    throw Error("invalid_state", "density matrix must be square");
  spins_ = spins_for_dim(entries_.rows());
  const double scale = std::max(1.0, entries_.norm());
  if (hermiticity_error(entries_) > kHermitianTol * scale)
    throw Error("invalid_state", "density matrix is not Hermitian");
  const Complex tr = entries_.trace();
  const double expected = rep_ == Representation::Full ? 1.0 : 0.0;
  if (std::abs(tr - expected) > kTraceTol * scale)
    throw Error("invalid_state", std::string("trace must be ") +
                                     (rep_ == Representation::Full ? "1" : "0") +
                                     " for a " + std::string(to_string(rep_)) +
                                     " density matrix");
}

DensityMatrix DensityMatrix::pure(const Vector &psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw Error("invalid_state", "zero state vector");
  const Vector v = psi / norm;
  return DensityMatrix(v * v.adjoint(), Representation::Full);
}

DensityMatrix DensityMatrix::basis_state(int n, std::size_t index) {
  const std::size_t dim = std::size_t{1} << n;
  if (index >= dim) throw Error("index_out_of_range", "basis state out of range");
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(std::move(m), Representation::Full);
}

DensityMatrix DensityMatrix::zero_deviation(int n) {
  const std::size_t dim = std::size_t{1} << n;
  return DensityMatrix(Matrix::Zero(dim, dim), Representation::Deviation);
}

DensityMatrix DensityMatrix::deviation() const {
  if (rep_ == Representation::Deviation) return *this;
  const Eigen::Index d = dim();
  Matrix m = entries_ - (entries_.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
  return DensityMatrix(std::move(m), Representation::Deviation);
}

DensityMatrix DensityMatrix::operator+(const DensityMatrix &other) const {
  require_same_tag(*this, other);
  return DensityMatrix(entries_ + other.entries_, rep_);
}

DensityMatrix DensityMatrix::operator-(const DensityMatrix &other) const {
  require_same_tag(*this, other);
  return DensityMatrix(entries_ - other.entries_, rep_);
}

DensityMatrix DensityMatrix::scaled(double factor) const {
  if (rep_ != Representation::Deviation)
    throw Error("representation_mismatch", "only deviation states can be scaled");
  return DensityMatrix(entries_ * factor, rep_);
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>> &terms) {
  if (terms.empty()) throw Error("invalid_state", "empty mixture");
  Matrix m = Matrix::Zero(terms.front().second.dim(), terms.front().second.dim());
  for (const auto &[p, rho] : terms) {
    if (p < 0.0) throw Error("invalid_state", "negative mixture weight");
    require_same_tag(terms.front().second, rho);
    m += p * rho.matrix();
  }
  return DensityMatrix(std::move(m), terms.front().second.representation());
}

ProductOperatorExpansion::ProductOperatorExpansion(int n)
    : spins_(n), coeffs_(pow4(n), 0.0) {
  if (n < 1 || n > kMaxSpins)
    throw Error("too_many_spins", "spin count out of range");
}

double ProductOperatorExpansion::coefficient(std::string_view word) const {
  return coeffs_.at(word_index(word, spins_));
}

void ProductOperatorExpansion::set(std::string_view word, double value) {
  coeffs_.at(word_index(word, spins_)) = value;
}

std::vector<std::pair<std::string, double>> ProductOperatorExpansion::terms(
    double tol) const {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t w = 0; w < coeffs_.size(); ++w)
    if (std::abs(coeffs_[w]) > tol) out.emplace_back(word_name(w, spins_), coeffs_[w]);
  return out;
}

std::vector<SpinAxis> ProductOperatorExpansion::word_factors(std::size_t word, int n) {
  std::vector<SpinAxis> f(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i, word >>= 2)
    f[static_cast<std::size_t>(i)] = static_cast<SpinAxis>(word & 3u);
  return f;
}

std::string ProductOperatorExpansion::word_name(std::size_t word, int n) {
  std::string out;
  for (SpinAxis a : word_factors(word, n)) {
    if (!out.empty()) out.push_back(' ');
    out += kFactorNames[static_cast<int>(a)];
  }
  return out;
}

std::size_t ProductOperatorExpansion::word_index(std::string_view name, int n) {
  std::istringstream in{std::string(name)};
  std::string tok;
  std::size_t idx = 0;
  int count = 0;
  while (in >> tok) {
    int code = -1;
    for (int d = 0; d < 4; ++d)
      if (tok == kFactorNames[d]) code = d;
    if (code < 0) throw Error("invalid_word", "unknown factor '" + tok + "'");
    idx = idx * 4 + static_cast<std::size_t>(code);
    ++count;
  }
  if (count != n)
    throw Error("invalid_word", "word must have one factor per spin");
  return idx;
}

DensityMatrix thermal_deviation(int n, const std::vector<double> &weights) {
  if (static_cast<int>(weights.size()) != n)
    throw Error("invalid_weights", "one weight per spin is required");
  const std::size_t dim = std::size_t{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    double p = 0.0;
    for (int i = 0; i < n; ++i)
      p += spin_bit(k, i, n) == 0 ? weights[static_cast<std::size_t>(i)]
                                  : -weights[static_cast<std::size_t>(i)];
    m(k, k) = p;
  }
  return DensityMatrix(std::move(m), Representation::Deviation);
}

DensityMatrix thermal_deviation(const SpinSystem &sys,
                                const std::vector<double> &weights) {
  return thermal_deviation(sys.size(), weights);
}

DensityMatrix effective_pure_target(int n, std::size_t basis_state) {
  const std::size_t dim = std::size_t{1} << n;
  if (basis_state >= dim)
    throw Error("index_out_of_range", "basis state out of range");
  Matrix m = Matrix::Zero(dim, dim);
  const double background = -1.0 / static_cast<double>(dim);
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = background;
  m(basis_state, basis_state) += 1.0;
  return DensityMatrix(std::move(m), Representation::Deviation);
}

ProductOperatorExpansion to_product_operators(const DensityMatrix &rho) {
  const int n = rho.spins();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Complex> t(pow4(n));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) t[tensor_index(r, c, n)] = rho.matrix()(r, c);
  // (m00, m01, m10, m11) -> (e, x, y, z) with M = eE + xIx + yIy + zIz.
  const Complex i(0.0, 1.0);
  Eigen::Matrix4cd fwd;
  fwd << 0.5, 0.0, 0.0, 0.5,
         0.0, 1.0, 1.0, 0.0,
         0.0, i, -i, 0.0,
         1.0, 0.0, 0.0, -1.0;
  for (int s = 0; s < n; ++s) transform_axis(t, s, n, fwd);
  ProductOperatorExpansion poe(n);
  for (std::size_t w = 0; w < t.size(); ++w) {
    const int k = nonidentity_factors(w, n);
    const double norm = k == 0 ? 1.0 : std::ldexp(1.0, k - 1);
    poe.set(w, t[w].real() / norm);
  }
  return poe;
}

DensityMatrix from_product_operators(const ProductOperatorExpansion &poe,
                                     Representation rep) {
  const int n = poe.spins();
  std::vector<Complex> t(poe.size());
  for (std::size_t w = 0; w < t.size(); ++w) {
    const int k = nonidentity_factors(w, n);
    const double norm = k == 0 ? 1.0 : std::ldexp(1.0, k - 1);
    t[w] = poe.coefficient(w) * norm;
  }
  const Complex i(0.0, 1.0);
  Eigen::Matrix4cd inv;
  inv << 1.0, 0.0, 0.0, 0.5,
         0.0, 0.5, -0.5 * i, 0.0,
         0.0, 0.5, 0.5 * i, 0.0,
         1.0, 0.0, 0.0, -0.5;
  for (int s = 0; s < n; ++s) transform_axis(t, s, n, inv);
  const std::size_t dim = std::size_t{1} << n;
  Matrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = t[tensor_index(r, c, n)];
  return DensityMatrix(std::move(m), rep);
}

Complex expectation(const DensityMatrix &rho, const Matrix &op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim())
    throw Error("dimension_mismatch", "operator and state dimensions differ");
  return (rho.matrix() * op).trace();
}

int coherence_order(std::size_t row, std::size_t col) {
  return std::popcount(col) - std::popcount(row);
}

DensityMatrix coherence_order_filter(const DensityMatrix &rho,
                                     const std::set<int> &keep_orders) {
  for (int p : keep_orders)
    if (!keep_orders.count(-p))
      throw Error("asymmetric_orders", "kept coherence orders must be closed under negation");
  Matrix m = rho.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (!keep_orders.count(coherence_order(static_cast<std::size_t>(r),
                                             static_cast<std::size_t>(c))))
        m(r, c) = 0.0;
  return DensityMatrix(std::move(m), rho.representation());
}

StateDistance distance(const DensityMatrix &a, const DensityMatrix &b) {
  require_same_tag(a, b);
  StateDistance d;
  Eigen::SelfAdjointEigenSolver<Matrix> diff(a.matrix() - b.matrix(),
                                             Eigen::EigenvaluesOnly);
  d.trace_distance = 0.5 * diff.eigenvalues().cwiseAbs().sum();
  if (a.representation() == Representation::Full) {
    Eigen::SelfAdjointEigenSolver<Matrix> ea(a.matrix());
    const Eigen::VectorXd root = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix sqrt_a = ea.eigenvectors() * root.asDiagonal() * ea.eigenvectors().adjoint();
    const Matrix inner = sqrt_a * b.matrix() * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Matrix> ei(0.5 * (inner + inner.adjoint()),
                                             Eigen::EigenvaluesOnly);
    const double root_trace = ei.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    d.fidelity = root_trace * root_trace;
  } else {
    const double aa = (a.matrix() * a.matrix()).trace().real();
    const double bb = (b.matrix() * b.matrix()).trace().real();
    const double ab = (a.matrix() * b.matrix()).trace().real();
    d.fidelity = (aa > 0.0 && bb > 0.0) ? ab / std::sqrt(aa * bb) : 0.0;
  }
  return d;
}

DensityMatrix apply_unitary(const Matrix &u, const DensityMatrix &rho) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim())
    throw Error("dimension_mismatch", "unitary and state dimensions differ");
  Matrix m = u * rho.matrix() * u.adjoint();
  // Restore exact Hermiticity lost to rounding.
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), rho.representation());
}

void write_density_matrix(std::ostream &out, const DensityMatrix &rho) {
  const auto old_precision = out.precision(17);
  out << "dim " << rho.dim() << "\n";
  out << "representation " << to_string(rho.representation()) << "\n";
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      if (c) out << ' ';
      out << rho.matrix()(r, c).real() << ' ' << rho.matrix()(r, c).imag();
    }
    out << "\n";
  }
  out.precision(old_precision);
}

DensityMatrix read_density_matrix(std::istream &in) {
  std::string key;
  long long dim = 0;
  std::string rep_name;
  if (!(in >> key) || key != "dim" || !(in >> dim) || dim < 2)
    throw Error("invalid_format", "expected 'dim <N>'");
  if (!(in >> key) || key != "representation" || !(in >> rep_name))
    throw Error("invalid_format", "expected 'representation full|deviation'");
  Representation rep;
  if (rep_name == "full")
    rep = Representation::Full;
  else if (rep_name == "deviation")
    rep = Representation::Deviation;
  else
    throw Error("invalid_format", "unknown representation '" + rep_name + "'");
  Matrix m(dim, dim);
  for (long long r = 0; r < dim; ++r)
    for (long long c = 0; c < dim; ++c) {
      double re = 0.0, im = 0.0;
      if (!(in >> re >> im)) throw Error("invalid_format", "truncated matrix data");
      m(r, c) = Complex(re, im);
    }
  return DensityMatrix(std::move(m), rep);
}

}  // namespace nmrqc
