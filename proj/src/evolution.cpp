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

#include "nmrqc/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nmrqc/error.hpp"

namespace nmrqc {

namespace {

double wrap_deg(double deg) { return std::remainder(deg, 360.0); }

Matrix single_pulse(int spin, double angle_deg, double phase_deg, int n) {
  const int one[1] = {spin};
  return pulse_rotation(one, angle_deg, phase_deg, n);
}

Matrix soft_pulse_physical(const SoftPulse &p, const SpinSystem &sys, const SimOptions &options,
                           const std::vector<double> &frames_deg) {
  const int n = sys.size();
  const std::vector<int> channel = sys.spins_on_channel(p.channel);
  const int ref = soft_pulse_reference(p, sys);
  double f_max = p.amplitude_hz;
  for (int s : channel) f_max = std::max(f_max, std::abs(p.carrier_hz - sys.offset_hz(s)));
  if (!(options.step_cap_s > 0.0)) throw Error("invalid_options", "step cap must be positive");
  if (f_max > 0.0 && options.step_cap_s > 1.0 / (20.0 * f_max) * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "integration step cap " << options.step_cap_s << " s is too coarse; required <= "
        << 1.0 / (20.0 * f_max) << " s";
    throw Error("step_cap_too_coarse", msg.str());
  }
  const std::size_t dim = std::size_t{1} << n;
  if (p.duration_s == 0.0) return Matrix::Identity(dim, dim);
  const Matrix h_int = internal_hamiltonian(sys, options.hamiltonian);
  Matrix sx = Matrix::Zero(dim, dim);
  Matrix sy = Matrix::Zero(dim, dim);
  for (int s : channel) {
    sx += spin_operator(SpinAxis::X, s, n);
    sy += spin_operator(SpinAxis::Y, s, n);
  }
  const auto steps = static_cast<std::size_t>(std::ceil(p.duration_s / options.step_cap_s - 1e-9));
  const double dt = p.duration_s / static_cast<double>(std::max<std::size_t>(steps, 1));
  const double w1 = kTwoPi * p.amplitude_hz;
  const double phase0 = deg_to_rad(p.phase_deg - frames_deg[static_cast<std::size_t>(ref)]);
  Matrix u = Matrix::Identity(dim, dim);
  for (std::size_t k = 0; k < std::max<std::size_t>(steps, 1); ++k) {
    const double tau = (static_cast<double>(k) + 0.5) * dt;
    const double alpha = phase0 + kTwoPi * p.carrier_hz * tau;
    const Matrix h = h_int + w1 * (std::cos(alpha) * sx + std::sin(alpha) * sy);
    u = propagator(h, dt) * u;
  }
  return u;
}

}  // namespace

void advance_frames(const PulseEvent &e, const SpinSystem &sys, std::vector<double> &frames_deg) {
  if (const auto *f = std::get_if<FrameShift>(&e)) {
    auto &r = frames_deg.at(static_cast<std::size_t>(f->spin));
    r = wrap_deg(r + f->phase_deg);
    return;
  }
  const double t = event_duration(e);
  if (t == 0.0) return;
  for (int s = 0; s < sys.size(); ++s) {
    auto &r = frames_deg[static_cast<std::size_t>(s)];
    r = wrap_deg(r - 360.0 * sys.offset_hz(s) * t);
  }
}

int soft_pulse_reference(const SoftPulse &p, const SpinSystem &sys) {
  const std::vector<int> channel = sys.spins_on_channel(p.channel);
  if (channel.empty()) throw Error("unknown_channel", "no spins on channel '" + p.channel + "'");
  int best = channel.front();
  for (int s : channel)
    if (std::abs(sys.offset_hz(s) - p.carrier_hz) < std::abs(sys.offset_hz(best) - p.carrier_hz)) best = s;
  return best;
}

Matrix event_propagator(const PulseEvent &e, const SpinSystem &sys, const SimOptions &options,
                        const std::vector<double> &frames_deg) {
  const int n = sys.size();
  const std::size_t dim = std::size_t{1} << n;
  if (frames_deg.size() != static_cast<std::size_t>(n))
    throw Error("dimension_mismatch", "one frame phase per spin required");
  if (const auto *p = std::get_if<HardPulse>(&e)) {
    Matrix u = Matrix::Identity(dim, dim);
    for (int s : p->spins) {
      if (s < 0 || s >= n) throw Error("index_out_of_range", "pulse spin out of range");
      u = single_pulse(s, p->angle_deg, p->phase_deg - frames_deg[static_cast<std::size_t>(s)], n) * u;
    }
    return u;
  }
  if (const auto *d = std::get_if<Delay>(&e))
    return propagator(internal_hamiltonian(sys, options.hamiltonian), d->duration_s);
  if (const auto *p = std::get_if<SoftPulse>(&e)) {
    if (options.pulse_model == PulseModel::Physical) return soft_pulse_physical(*p, sys, options, frames_deg);
    const int ref = soft_pulse_reference(*p, sys);
    const Matrix half = propagator(internal_hamiltonian(sys, options.hamiltonian), p->duration_s / 2.0);
    std::vector<double> mid = frames_deg;
    advance_frames(Delay{p->duration_s / 2.0}, sys, mid);
    const Matrix rot = single_pulse(ref, 360.0 * p->amplitude_hz * p->duration_s,
                                    p->phase_deg - mid[static_cast<std::size_t>(ref)], n);
    return half * rot * half;
  }
  if (std::holds_alternative<FrameShift>(e)) return Matrix::Identity(dim, dim);
  throw Error("not_unitary", "crusher has no propagator; it is a coherence-order filter");
}

DensityMatrix to_logical(const DensityMatrix &rho, const std::vector<double> &frames_deg) {
  const Matrix z = z_rotations(frames_deg, rho.spins());
  Matrix m = rho.matrix();
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) *= z(r, r) * std::conj(z(c, c));
  return DensityMatrix(std::move(m), rho.representation());
}

DensityMatrix SimResult::logical_state() const { return to_logical(final_state, frames_deg); }

SimResult simulate(const PulseSequence &seq, const DensityMatrix &rho0, const SpinSystem &sys,
                   const SimOptions &options) {
  if (seq.spins() != sys.size() || rho0.spins() != sys.size())
    throw Error("dimension_mismatch", "sequence, state and system differ in spin count");
  if (options.relaxation && !sys.has_relaxation())
    throw Error("missing_relaxation", "relaxation requested but T1/T2 are not set for every spin");
  SimResult result{rho0, {}, std::vector<double>(static_cast<std::size_t>(sys.size()), 0.0)};
  for (const PulseEvent &e : seq.events()) {
    if (std::holds_alternative<Crusher>(e)) {
      result.final_state = coherence_order_filter(result.final_state, {0});
    } else if (!std::holds_alternative<FrameShift>(e)) {
      const Matrix u = event_propagator(e, sys, options, result.frames_deg);
      result.final_state = apply_unitary(u, result.final_state);
    }
    const double t = event_duration(e);
    if (options.relaxation && t > 0.0) result.final_state = relax(result.final_state, t, sys);
    advance_frames(e, sys, result.frames_deg);
    if (options.trajectory == TrajectoryCapture::PerEvent) result.trajectory.push_back(result.final_state);
  }
  return result;
}

SequencePropagator sequence_propagator(const PulseSequence &seq, const SpinSystem &sys,
                                       const SimOptions &options) {
  if (seq.spins() != sys.size()) throw Error("dimension_mismatch", "sequence and system differ in spin count");
  const std::size_t dim = std::size_t{1} << sys.size();
  SequencePropagator out{Matrix::Identity(dim, dim),
                         std::vector<double>(static_cast<std::size_t>(sys.size()), 0.0), {}};
  for (const PulseEvent &e : seq.events()) {
    if (!std::holds_alternative<FrameShift>(e))
      out.physical = event_propagator(e, sys, options, out.frames_deg) * out.physical;
    advance_frames(e, sys, out.frames_deg);
  }
  out.logical = z_rotations(out.frames_deg, sys.size()) * out.physical;
  return out;
}

namespace {

// In-place Walsh-Hadamard transform (unnormalised).
void walsh_hadamard(std::vector<double> &v) {
  for (std::size_t len = 1; len < v.size(); len <<= 1)
    for (std::size_t i = 0; i < v.size(); i += len << 1)
      for (std::size_t j = i; j < i + len; ++j) {
        const double a = v[j], b = v[j + len];
        v[j] = a + b;
        v[j + len] = a - b;
      }
}

}  // namespace

DensityMatrix relax(const DensityMatrix &rho, double duration_s, const SpinSystem &sys) {
  if (!sys.has_relaxation()) throw Error("missing_relaxation", "T1 and T2 are required for every spin");
  if (rho.spins() != sys.size()) throw Error("dimension_mismatch", "state and system differ in spin count");
  if (duration_s < 0.0) throw Error("invalid_duration", "relaxation time must be nonnegative");
  const int n = sys.size();
  const std::size_t dim = std::size_t{1} << n;
  // Rates indexed by bit position.
  std::vector<double> r1(static_cast<std::size_t>(n)), r2(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    r1[static_cast<std::size_t>(bit_position(s, n))] = 1.0 / *sys.spin(s).t1_s;
    r2[static_cast<std::size_t>(bit_position(s, n))] = 1.0 / *sys.spin(s).t2_s;
  }
  auto summed = [&](const std::vector<double> &rates, std::size_t mask) {
    double total = 0.0;
    for (int b = 0; b < n; ++b)
      if ((mask >> b) & 1u) total += rates[static_cast<std::size_t>(b)];
    return total;
  };

  Matrix m = rho.matrix();
  const double identity_part = rho.is_deviation() ? 0.0 : 1.0 / static_cast<double>(dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (r != c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *=
            std::exp(-duration_s * summed(r2, r ^ c));

  const Matrix eq = thermal_deviation(sys, sys.thermal_weights()).matrix();
  std::vector<double> d(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    d[k] = m(i, i).real() - identity_part - eq(i, i).real();
  }
  walsh_hadamard(d);
  for (std::size_t mask = 0; mask < dim; ++mask) d[mask] *= std::exp(-duration_s * summed(r1, mask));
  walsh_hadamard(d);
  for (std::size_t k = 0; k < dim; ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    m(i, i) = d[k] / static_cast<double>(dim) + identity_part + eq(i, i).real();
  }
  return DensityMatrix(std::move(m), rho.representation());
}

double error_rate(double j_hz, double t2_s) {
  if (j_hz == 0.0) throw Error("missing_coupling", "error rate undefined for J = 0");
  if (!(t2_s > 0.0)) throw Error("invalid_relaxation", "T2 must be positive");
  return 1.0 / (2.0 * std::abs(j_hz) * t2_s);
}

double error_rate(const SpinSystem &sys, std::pair<int, int> pair) {
  const auto [a, b] = pair;
  if (a < 0 || b < 0 || a >= sys.size() || b >= sys.size() || a == b)
    throw Error("index_out_of_range", "invalid spin pair");
  const auto &ta = sys.spin(a).t2_s;
  const auto &tb = sys.spin(b).t2_s;
  if (!ta || !tb) throw Error("missing_relaxation", "T2 is required for both spins");
  return error_rate(sys.coupling_hz(a, b), std::min(*ta, *tb));
}

bool threshold_check(double rate, double threshold) { return rate <= threshold; }

}  // namespace nmrqc
