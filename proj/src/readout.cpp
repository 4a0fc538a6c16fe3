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

#include "nmrqc/readout.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>

#include "nmrqc/error.hpp"

namespace nmrqc {

namespace {

struct SignalTerm {
  Complex amplitude;
  double omega;  // rad/s
  double decay;  // 1/s
};

std::vector<double> frames_or_zero(const AcquireOptions &options, int n) {
  if (options.frames_deg.empty()) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
  if (options.frames_deg.size() != static_cast<std::size_t>(n))
    throw Error("dimension_mismatch", "frame report needs one phase per spin");
  return options.frames_deg;
}

// One DFT bin of the unshifted transform with the exp(-2πi jk/N) sign.
Complex dft_bin(const std::vector<Complex> &x, std::size_t k) {
  const std::size_t n = x.size();
  Complex acc(0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double frac = static_cast<double>((j * k) % n) / static_cast<double>(n);
    acc += x[j] * std::exp(Complex(0.0, -kTwoPi * frac));
  }
  return acc / std::sqrt(static_cast<double>(n));
}

// Real part summed over ±2 bins around frequency f (unshifted bin indices).
double integrate_line(const std::vector<Complex> &samples, double dwell, double f) {
  const auto n = static_cast<long long>(samples.size());
  const long long centre = std::llround(f * static_cast<double>(n) * dwell);
  double total = 0.0;
  for (long long b = centre - 2; b <= centre + 2; ++b) {
    const long long shifted = b + n / 2;
    if (shifted < 0 || shifted >= n) continue;
    total += dft_bin(samples, static_cast<std::size_t>(((b % n) + n) % n)).real();
  }
  return total;
}

double integrate_spectrum(const Spectrum &s, double f) {
  const auto n = static_cast<long long>(s.amplitude.size());
  const long long centre = std::llround(f * static_cast<double>(n) * s.dwell_s) + n / 2;
  double total = 0.0;
  for (long long b = centre - 2; b <= centre + 2; ++b)
    if (b >= 0 && b < n) total += s.amplitude[static_cast<std::size_t>(b)].real();
  return total;
}

std::vector<Complex> reference_line(double f, double dwell, std::size_t npoints) {
  std::vector<Complex> x(npoints);
  for (std::size_t k = 0; k < npoints; ++k)
    x[k] = 0.5 * std::exp(Complex(0.0, kTwoPi * f * dwell * static_cast<double>(k)));
  return x;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

}  // namespace

Fid acquire(const DensityMatrix &rho, const SpinSystem &sys, const std::vector<int> &spins, double dwell_s,
            std::size_t npoints, const AcquireOptions &options) {
  const int n = sys.size();
  if (rho.spins() != n) throw Error("dimension_mismatch", "state and system differ in spin count");
  if (!(dwell_s > 0.0)) throw Error("invalid_acquisition", "dwell time must be positive");
  if (npoints < 2) throw Error("invalid_acquisition", "at least two points are required");
  if (spins.empty()) throw Error("invalid_acquisition", "no spins to observe");
  for (int s : spins)
    if (s < 0 || s >= n) throw Error("index_out_of_range", "observed spin out of range");
  if (options.relaxation && !sys.has_relaxation())
    throw Error("missing_relaxation", "T2 decay requested but relaxation times are missing");
  const std::vector<double> frames = frames_or_zero(options, n);
  const std::size_t dim = std::size_t{1} << n;

  Matrix obs = Matrix::Zero(dim, dim);
  for (int s : spins)
    obs += std::exp(Complex(0.0, deg_to_rad(frames[static_cast<std::size_t>(s)]))) * raising_operator(s, n);

  const Matrix h = internal_hamiltonian(sys, options.hamiltonian);
  Matrix v = Matrix::Identity(dim, dim);
  Eigen::VectorXd energy(dim);
  if (is_diagonal(h)) {
    for (std::size_t k = 0; k < dim; ++k) energy(static_cast<Eigen::Index>(k)) = h(k, k).real();
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    v = eig.eigenvectors();
    energy = eig.eigenvalues();
  }
  const Matrix rt = v.adjoint() * rho.matrix() * v;
  const Matrix ot = v.adjoint() * obs * v;

  std::vector<double> r2(static_cast<std::size_t>(n), 0.0);
  if (options.relaxation)
    for (int s = 0; s < n; ++s) r2[static_cast<std::size_t>(bit_position(s, n))] = 1.0 / *sys.spin(s).t2_s;

  std::vector<SignalTerm> terms;
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const Complex a = rt(r, c) * ot(c, r);
      if (std::abs(a) < 1e-300) continue;
      double decay = 0.0;
      for (int b = 0; b < n; ++b)
        if (((r ^ c) >> b) & 1u) decay += r2[static_cast<std::size_t>(b)];
      terms.push_back({a, energy(static_cast<Eigen::Index>(c)) - energy(static_cast<Eigen::Index>(r)), decay});
    }

  Fid fid{spins, dwell_s, std::vector<Complex>(npoints, Complex(0.0)), false};
  for (std::size_t k = 0; k < npoints; ++k) {
    const double t = dwell_s * static_cast<double>(k);
    Complex acc(0.0);
    for (const SignalTerm &term : terms)
      acc += term.amplitude * std::exp(Complex(-term.decay * t, term.omega * t));
    fid.samples[k] = acc;
  }
  const double nyquist = 0.5 / dwell_s;
  for (int s : spins)
    for (const MultipletLine &line : multiplet_lines(sys, s))
      if (std::abs(line.frequency_hz) >= nyquist) fid.aliasing_warning = true;
  return fid;
}

std::pair<double, std::size_t> default_acquisition(const SpinSystem &sys) {
  std::vector<double> freqs;
  double j_min = 0.0;
  for (int s = 0; s < sys.size(); ++s) {
    for (const MultipletLine &line : multiplet_lines(sys, s)) freqs.push_back(line.frequency_hz);
    for (int t : sys.neighbors(s)) {
      const double j = std::abs(sys.coupling_hz(s, t));
      j_min = j_min == 0.0 ? j : std::min(j_min, j);
    }
  }
  double f_max = 0.0;
  for (double f : freqs) f_max = std::max(f_max, std::abs(f));
  const double coarsest = j_min > 0.0 ? j_min / 4.0 : std::max(1.0, f_max / 16.0);
  // Resolution: the largest step (in millihertz) dividing every line
  // position, refined until neighbouring lines are four bins apart.
  long long g = 0;
  bool exact = true;
  for (double f : freqs) {
    const double milli = std::abs(f) * 1000.0;
    if (std::abs(milli - std::round(milli)) > 1e-6) exact = false;
    g = gcd_ll(g, std::llround(milli));
  }
  double step = coarsest / 2.0;
  if (exact && g > 0) {
    step = static_cast<double>(g) / 1000.0;
    if (step > coarsest) step /= std::ceil(step / coarsest);
    if (step < coarsest / 64.0) step = coarsest / 2.0;
  }
  std::size_t npoints = 64;
  while (static_cast<double>(npoints) * step <= 2.2 * f_max) npoints <<= 1;
  return {1.0 / (static_cast<double>(npoints) * step), npoints};
}

Spectrum spectrum(const Fid &fid) {
  const std::size_t n = fid.samples.size();
  if (n < 2 || !(fid.dwell_s > 0.0)) throw Error("invalid_acquisition", "FID needs two points and a dwell");
  // Same exp(-2 pi i jk/N) / sqrt(N) transform as fft_reference, in O(N log N).
  std::vector<Complex> raw;
  Eigen::FFT<double> fft;
  fft.fwd(raw, fid.samples);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Complex &v : raw) v *= norm;
  Spectrum s;
  s.dwell_s = fid.dwell_s;
  s.frequency_hz.resize(n);
  s.amplitude.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.amplitude[k] = raw[(k + n / 2) % n];
    s.frequency_hz[k] = (static_cast<double>(k) - static_cast<double>(n / 2)) /
                        (static_cast<double>(n) * fid.dwell_s);
  }
  return s;
}

std::vector<LineEntry> assign_lines(const Spectrum &s, const SpinSystem &sys, int spin, double threshold) {
  std::vector<LineEntry> out;
  for (const MultipletLine &line : multiplet_lines(sys, spin)) {
    LineEntry e;
    e.spin = spin;
    e.frequency_hz = line.frequency_hz;
    e.label = line.label;
    e.neighbor_bits = line.neighbor_bits;
    const double ref =
        integrate_line(reference_line(line.frequency_hz, s.dwell_s, s.amplitude.size()), s.dwell_s, line.frequency_hz);
    e.amplitude = ref != 0.0 ? integrate_spectrum(s, line.frequency_hz) / ref : 0.0;
    e.present = std::abs(e.amplitude) > threshold;
    out.push_back(std::move(e));
  }
  return out;
}

std::string_view to_string(BitVerdict v) {
  switch (v) {
    case BitVerdict::Zero: return "0";
    case BitVerdict::One: return "1";
    case BitVerdict::AveragedToZero: return "averaged-to-zero";
  }
  return "?";
}

std::vector<BitDecoding> decode_bits(const std::vector<Spectrum> &spectra, const std::vector<int> &spins,
                                     const SpinSystem &sys, double threshold) {
  if (spectra.size() != spins.size()) throw Error("dimension_mismatch", "one spectrum per spin required");
  std::vector<BitDecoding> out;
  for (std::size_t k = 0; k < spins.size(); ++k) {
    BitDecoding d;
    d.spin = spins[k];
    d.lines = assign_lines(spectra[k], sys, spins[k], threshold);
    for (const LineEntry &e : d.lines) d.integrated += e.amplitude;
    d.verdict = d.integrated > threshold ? BitVerdict::Zero
                : d.integrated < -threshold ? BitVerdict::One
                                            : BitVerdict::AveragedToZero;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<LineEntry> decode_neighbors(const Spectrum &s, const SpinSystem &sys, int spin, double threshold) {
  return assign_lines(s, sys, spin, threshold);
}

std::vector<SpinReadout> read_out(const DensityMatrix &rho, const SpinSystem &sys, const std::vector<int> &spins,
                                  const AcquireOptions &options, double threshold) {
  const int n = sys.size();
  const std::vector<double> frames = frames_or_zero(options, n);
  const auto [dwell, npoints] = default_acquisition(sys);
  std::vector<SpinReadout> out;
  for (int s : spins) {
    if (s < 0 || s >= n) throw Error("index_out_of_range", "read-out spin out of range");
    const int one[1] = {s};
    const Matrix pulse = pulse_rotation(one, 90.0, 90.0 - frames[static_cast<std::size_t>(s)], n);
    const DensityMatrix rotated = apply_unitary(pulse, rho);
    Fid fid = acquire(rotated, sys, {s}, dwell, npoints, options);
    Spectrum spec = spectrum(fid);
    BitDecoding bits = decode_bits({spec}, {s}, sys, threshold).front();
    out.push_back(SpinReadout{std::move(fid), std::move(spec), std::move(bits)});
  }
  return out;
}

EnsembleMeasurement measure(const DensityMatrix &rho, const std::vector<int> &spins) {
  if (rho.is_deviation())
    throw Error("requires_full_state", "outcome probabilities need a full (unit-trace) state");
  const int n = rho.spins();
  for (int s : spins)
    if (s < 0 || s >= n) throw Error("index_out_of_range", "register spin out of range");
  EnsembleMeasurement m;
  m.probabilities.assign(std::size_t{1} << spins.size(), 0.0);
  for (Eigen::Index k = 0; k < rho.dim(); ++k)
    m.probabilities[local_index(static_cast<std::size_t>(k), spins, n)] += std::max(0.0, rho.matrix()(k, k).real());
  m.marginals.assign(spins.size(), 0.0);
  for (std::size_t v = 0; v < m.probabilities.size(); ++v)
    for (std::size_t j = 0; j < spins.size(); ++j)
      if ((v >> (spins.size() - 1 - j)) & 1u) m.marginals[j] += m.probabilities[v];
  return m;
}

SampledMeasurement measure_sampled(const DensityMatrix &rho, const std::vector<int> &spins, std::size_t shots,
                                   std::uint64_t seed) {
  const EnsembleMeasurement ens = measure(rho, spins);
  SampledMeasurement out;
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> draw(ens.probabilities.begin(), ens.probabilities.end());
  for (std::size_t k = 0; k < shots; ++k) {
    const std::size_t v = draw(rng);
    out.samples.push_back(v);
    ++out.counts[v];
  }
  if (!out.samples.empty()) {
    const std::size_t v = out.samples.back();
    const int n = rho.spins();
    Matrix m = rho.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        if (local_index(static_cast<std::size_t>(r), spins, n) != v ||
            local_index(static_cast<std::size_t>(c), spins, n) != v)
          m(r, c) = 0.0;
    m /= ens.probabilities[v];
    out.collapsed = DensityMatrix(std::move(m), Representation::Full);
  }
  return out;
}

namespace {

Matrix word_matrix(std::size_t word, int n) {
  const std::vector<SpinAxis> f = ProductOperatorExpansion::word_factors(word, n);
  Matrix m = Matrix::Identity(1, 1);
  int k = 0;
  for (SpinAxis a : f) {
    if (a != SpinAxis::E) ++k;
    m = kron(m, Matrix(single_spin_operator(a)));
  }
  return k > 0 ? Matrix(std::ldexp(1.0, k - 1) * m) : m;
}

bool is_z_word(std::size_t word, int n) {
  for (SpinAxis a : ProductOperatorExpansion::word_factors(word, n))
    if (a == SpinAxis::X || a == SpinAxis::Y) return false;
  return true;
}

}  // namespace

TomographyResult tomography(const std::function<DensityMatrix()> &experiment, int n,
                            const TomographyOptions &options) {
  if (n < 1 || n > 6) throw Error("too_many_spins", "tomography supports 1..6 spins");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t words = dim * dim;

  std::vector<std::size_t> unknowns;
  for (std::size_t w = 1; w < words; ++w)
    if (!options.diagonal_only || is_z_word(w, n)) unknowns.push_back(w);
  std::vector<Matrix> basis;
  for (std::size_t w : unknowns) basis.push_back(word_matrix(w, n));

  // Settings: per spin 0 = none, 1 = 90_x, 2 = 90_y.
  std::vector<std::vector<int>> settings;
  if (options.diagonal_only) {
    for (int s = 0; s < n; ++s) {
      std::vector<int> set(static_cast<std::size_t>(n), 0);
      set[static_cast<std::size_t>(s)] = 2;
      settings.push_back(set);
    }
  } else {
    std::size_t total = 1;
    for (int s = 0; s < n; ++s) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<int> set(static_cast<std::size_t>(n));
      std::size_t c = code;
      for (int s = n - 1; s >= 0; --s, c /= 3) set[static_cast<std::size_t>(s)] = static_cast<int>(c % 3);
      settings.push_back(set);
    }
  }

  // Observables: I+ of spin s on one neighbour configuration.
  std::vector<Matrix> observables;
  for (int s = 0; s < n; ++s) {
    const Matrix raise = raising_operator(s, n);
    for (std::size_t m = 0; m < (dim >> 1); ++m) {
      Matrix proj = Matrix::Zero(dim, dim);
      for (std::size_t k = 0; k < dim; ++k) {
        std::size_t neighbours = 0;
        for (int t = 0; t < n; ++t)
          if (t != s) neighbours = (neighbours << 1) | static_cast<std::size_t>(spin_bit(k, t, n));
        if (neighbours == m) proj(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
      }
      observables.push_back(raise * proj);
    }
  }

  const auto rows = static_cast<Eigen::Index>(2 * settings.size() * observables.size());
  Eigen::MatrixXd design(rows, static_cast<Eigen::Index>(unknowns.size()));
  Eigen::VectorXd data(rows);
  std::optional<Representation> rep;
  TomographyResult result{DensityMatrix::zero_deviation(n), settings.size(), 0.0, {}};
  Eigen::Index row = 0;
  for (const auto &set : settings) {
    Matrix u = Matrix::Identity(dim, dim);
    std::string name;
    for (int s = 0; s < n; ++s) {
      const int code = set[static_cast<std::size_t>(s)];
      name.push_back("IXY"[code]);
      if (code == 0) continue;
      const int one[1] = {s};
      u = pulse_rotation(one, 90.0, code == 1 ? 0.0 : 90.0, n) * u;
    }
    result.settings.push_back(name);
    const DensityMatrix source = experiment();
    if (source.spins() != n) throw Error("dimension_mismatch", "experiment returned the wrong spin count");
    if (!rep) rep = source.representation();
    const Matrix observed = u * source.matrix() * u.adjoint();
    for (const Matrix &o : observables) {
      const Complex y = (observed * o).trace();
      const Matrix back = u.adjoint() * o * u;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const Complex a = (basis[k].transpose().cwiseProduct(back)).sum();
        design(row, static_cast<Eigen::Index>(k)) = a.real();
        design(row + 1, static_cast<Eigen::Index>(k)) = a.imag();
      }
      data(row) = y.real();
      data(row + 1) = y.imag();
      row += 2;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto &sv = svd.singularValues();
  result.condition_number = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                     : std::numeric_limits<double>::infinity();
  const Eigen::VectorXd coeffs = svd.solve(data);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < basis.size(); ++k) m += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
  m = (0.5 * (m + m.adjoint())).eval();
  if (rep == Representation::Full) m += Matrix::Identity(dim, dim) / static_cast<double>(dim);
  result.state = DensityMatrix(std::move(m), rep.value_or(Representation::Deviation));
  return result;
}

void write_fid_csv(std::ostream &out, const Fid &fid) {
  const auto old = out.precision(17);
  out << "time_s,real,imag\n";
  for (std::size_t k = 0; k < fid.samples.size(); ++k)
    out << fid.dwell_s * static_cast<double>(k) << ',' << fid.samples[k].real() << ',' << fid.samples[k].imag()
        << "\n";
  out.precision(old);
}

void write_spectrum_csv(std::ostream &out, const Spectrum &s) {
  const auto old = out.precision(17);
  out << "freq_hz,real,imag\n";
  for (std::size_t k = 0; k < s.amplitude.size(); ++k)
    out << s.frequency_hz[k] << ',' << s.amplitude[k].real() << ',' << s.amplitude[k].imag() << "\n";
  out.precision(old);
}

void write_line_table(std::ostream &out, const std::vector<BitDecoding> &bits) {
  const auto old = out.precision(10);
  out << "spin,label,frequency_hz,amplitude,present,verdict\n";
  for (const BitDecoding &b : bits)
    for (const LineEntry &e : b.lines)
      out << e.spin << ',' << (e.label.empty() ? "-" : e.label) << ',' << e.frequency_hz << ',' << e.amplitude
          << ',' << (e.present ? "yes" : "no") << ',' << to_string(b.verdict) << "\n";
  out.precision(old);
}

}  // namespace nmrqc
