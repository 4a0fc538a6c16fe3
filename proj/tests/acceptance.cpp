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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "nmrqc/algorithms.hpp"
#include "nmrqc/evolution.hpp"
#include "nmrqc/pulse_compiler.hpp"
#include "nmrqc/readout.hpp"
#include "nmrqc/state_prep.hpp"

using namespace nmrqc;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const std::string &title, double time_limit_s, const std::function<void(Outcome &)> &body) {
  Outcome out;
  out.detail << std::setprecision(3);
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception &e) {
    out.pass = false;
    out.detail << " exception: " << e.what();
  }
  const double elapsed = seconds_since(t0);
  if (elapsed >= time_limit_s) {
    out.pass = false;
    out.detail << " runtime " << elapsed << " s exceeds " << time_limit_s << " s";
  }
  failures += out.pass ? 0 : 1;
  std::cout << "AC" << std::setw(2) << std::setfill('0') << id << std::setfill(' ') << ' '
            << (out.pass ? "PASS" : "FAIL") << "  " << title << " |" << out.detail.str() << " (" << std::fixed
            << std::setprecision(3) << elapsed << " s)" << std::defaultfloat << "\n";
}

std::vector<int> all_spins(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

// Independent oracle for the success probability: best rational j/r with
// r <= M within 1/(2N) of k/N, verified by a^r = 1 mod M.
double brute_force_success(const std::vector<double> &probs, std::uint64_t modulus, std::uint64_t base) {
  const double n = static_cast<double>(probs.size());
  double total = 0.0;
  for (std::size_t k = 1; k < probs.size(); ++k) {
    if (probs[k] < 1e-14) continue;
    for (std::uint64_t r = 1; r <= modulus; ++r) {
      const double j = std::round(static_cast<double>(k) * static_cast<double>(r) / n);
      if (std::abs(static_cast<double>(k) / n - j / static_cast<double>(r)) < 1.0 / (2.0 * n)) {
        if (std::gcd(static_cast<std::uint64_t>(j), r) == 1 && powmod(base, r, modulus) == 1) total += probs[k];
        break;
      }
    }
  }
  return total;
}

double line_phase_deg(const DensityMatrix &rho, int spin) {
  const int n = rho.spins();
  const double x = expectation(rho, spin_operator(SpinAxis::X, spin, n)).real();
  const double y = expectation(rho, spin_operator(SpinAxis::Y, spin, n)).real();
  return rad_to_deg(std::atan2(y, x));
}

}  // namespace

int main() {
  std::cout << std::setprecision(3);

  criterion(1, "CNOT truth table at pulse level (fidelity > 1-1e-9 per row, < 1 s)", 1.0, [](Outcome &o) {
    const SpinSystem sys = fixtures::chloroform();
    Circuit c(2);
    c.add(Cnot{0, 1});
    const PulseSequence seq = compile_circuit(c, sys);
    const std::size_t expect[] = {0, 1, 3, 2};
    double worst = 1.0;
    for (std::size_t in = 0; in < 4; ++in) {
      const DensityMatrix out = simulate(seq, DensityMatrix::basis_state(2, in), sys).logical_state();
      worst = std::min(worst, distance(out, DensityMatrix::basis_state(2, expect[in])).fidelity);
    }
    o.detail << " min fidelity " << std::setprecision(15) << worst;
    o.check(worst > 1.0 - 1e-9, "fidelity");
  });

  criterion(2, "Gate matrices: compiled CNOT/Had < 1e-9; Had^2 = I, (90y)^2 = 180y < 1e-12", 60.0, [](Outcome &o) {
    const SpinSystem sys = fixtures::chloroform();
    const double e_cnot =
        phase_aligned_distance(sequence_propagator(compile_gate(Cnot{0, 1}, sys), sys).logical, gate_matrix(Cnot{0, 1}, 2));
    const double e_had =
        phase_aligned_distance(sequence_propagator(compile_gate(Hadamard{0}, sys), sys).logical, gate_matrix(Hadamard{0}, 2));
    const Matrix h = gate_matrix(Hadamard{0}, 1);
    const Matrix y90 = gate_matrix(Rotation{0, RotationAxis::Y, 90}, 1);
    const double e_hh = (h * h - Matrix::Identity(2, 2)).norm();
    const double e_yy = (y90 * y90 - gate_matrix(Rotation{0, RotationAxis::Y, 180}, 1)).norm();
    o.detail << " cnot " << e_cnot << ", had " << e_had << ", had^2 " << e_hh << ", 90y^2 " << e_yy;
    o.check(e_cnot < 1e-9 && e_had < 1e-9, "compiled");
    o.check(e_hh < 1e-12 && e_yy < 1e-12, "identities");
  });

  criterion(3, "FFT/QFT examples (a)-(h) < 1e-10 after rescaling; period inversion N=8", 60.0, [](Outcome &o) {
    const Complex I(0, 1);
    using V = std::vector<Complex>;
    const std::vector<std::pair<V, V>> cases{
        {{1, 0, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1, 1}}, {{1, 0, 0, 0, 1, 0, 0, 0}, {1, 0, 1, 0, 1, 0, 1, 0}},
        {{1, 0, 1, 0, 1, 0, 1, 0}, {1, 0, 0, 0, 1, 0, 0, 0}}, {{1, 1, 1, 1, 1, 1, 1, 1}, {1, 0, 0, 0, 0, 0, 0, 0}},
        {{1, 0, 0, 0, 1, 0, 0, 0}, {1, 0, 1, 0, 1, 0, 1, 0}}, {{0, 1, 0, 0, 0, 1, 0, 0}, {1, 0, -I, 0, -1, 0, I, 0}},
        {{0, 0, 1, 0, 0, 0, 1, 0}, {1, 0, -1, 0, 1, 0, -1, 0}}, {{0, 0, 0, 1, 0, 0, 0, 1}, {1, 0, I, 0, -1, 0, -I, 0}}};
    const Matrix q = qft_matrix(8, kDefaultFourierSign);
    const Matrix qc = circuit_unitary(qft_circuit({0, 1, 2}, kDefaultFourierSign, 3));
    double worst = 0.0;
    for (const auto &[x, want] : cases) {
      const V y = fft_reference(x, kDefaultFourierSign);
      const Vector xv = Eigen::Map<const Vector>(x.data(), 8);
      const Vector qy = q * xv;
      const Vector cy = qc * xv;
      for (int k = 0; k < 8; ++k) {
        worst = std::max(worst, std::abs(y[k] / y[0] - want[k]));
        worst = std::max(worst, std::abs(qy(k) / qy(0) - want[k]));
        worst = std::max(worst, std::abs(cy(k) / cy(0) - want[k]));
      }
    }
    int inversion_failures = 0;
    for (int r : {1, 2, 4, 8})
      for (int shift = 0; shift < r; ++shift)
        for (FourierSign sign : {FourierSign::Plus, FourierSign::Minus}) {
          V x(8, 0.0);
          for (int j = shift; j < 8; j += r) x[j] = 1.0;
          const V y = fft_reference(x, sign);
          for (int k = 0; k < 8; ++k) {
            const bool on = k % (8 / r) == 0;
            if (on != (std::abs(y[k]) > 1e-10)) ++inversion_failures;
          }
        }
    o.detail << " max example error " << worst << ", period-inversion violations " << inversion_failures;
    o.check(worst < 1e-10, "examples");
    o.check(inversion_failures == 0, "period inversion");
  });

  criterion(4, "Shor worked example: P = 1/2 on {0,4} (1e-10), recover_period(4,8) = 2, deferred measurement (< 1 s)",
            1.0, [](Outcome &o) {
              const std::vector<std::size_t> f{3, 1, 3, 1, 3, 1, 3, 1};
              const auto r = period_find(f, 3, 2, 4);
              double err = 0.0;
              for (std::size_t k = 0; k < 8; ++k) err = std::max(err, std::abs(r.probabilities[k] - ((k % 4 == 0) ? 0.5 : 0.0)));
              PeriodFindingOptions deferred;
              deferred.measure_register2 = true;
              const auto d = period_find(f, 3, 2, 4, deferred);
              double derr = 0.0;
              for (std::size_t k = 0; k < 8; ++k) derr = std::max(derr, std::abs(d.probabilities[k] - r.probabilities[k]));
              const auto rec = recover_period(4, 8, 4);
              o.detail << " distribution error " << err << ", deferred difference " << derr << ", r = "
                       << (rec ? std::to_string(*rec) : "none");
              o.check(err < 1e-10, "distribution");
              o.check(derr < 1e-10, "deferred");
              o.check(rec && *rec == 2, "recover_period");
            });

  criterion(5, "Factor 15 with a=7, n1=8, n2=4: r = 4, factors {3,5}, seeded sampling reproducible (< 30 s)", 30.0,
            [](Outcome &o) {
              const auto r = period_find(PeriodFindingProblem{});
              const double exact = brute_force_success(r.probabilities, 15, 7);
              PeriodFindingOptions s;
              s.mode = MeasurementMode::Sampled;
              s.shots = 200;
              const auto a = period_find(PeriodFindingProblem{}, s);
              const auto b = period_find(PeriodFindingProblem{}, s);
              o.detail << " r = " << (r.period ? std::to_string(*r.period) : "none") << ", factors "
                       << (r.factors ? std::to_string(r.factors->first) + "x" + std::to_string(r.factors->second) : "none")
                       << ", success " << r.success_probability << " (exact " << exact << "), sampled success "
                       << a.success_probability;
              o.check(r.period && *r.period == 4, "period");
              o.check(r.factors && std::min(r.factors->first, r.factors->second) == 3 &&
                          std::max(r.factors->first, r.factors->second) == 5,
                      "factors");
              o.check(r.success_probability >= exact - 1e-12, "success probability");
              o.check(a.histogram == b.histogram && a.period == b.period, "reproducibility");
              o.check(a.period && *a.period == 4, "sampled period");
            });

  criterion(6, "Effective pure states: temporal exact (n=2,3), logical lists, spatial < 1e-8, experiment bound", 60.0,
            [](Outcome &o) {
              bool temporal_exact = true;
              for (int n : {2, 3}) {
                const SpinSystem sys = fixtures::coupled_spins(n);
                for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
                  const auto t = temporal_average(sys, s, std::vector<double>(static_cast<std::size_t>(n), 1.0));
                  const Matrix want = t.scale * effective_pure_target(n, s).matrix();
                  temporal_exact &= (t.combined.matrix() - want).cwiseAbs().maxCoeff() == 0.0;
                  temporal_exact &= t.circuits.size() >= t.lower_bound;
                }
              }
              const SpinSystem three = fixtures::coupled_spins(3);
              const auto l = logical_label(three);
              const double a = three.thermal_weights()[0];
              const double before[] = {3, 1, 1, -1, 1, -1, -1, -3}, after[] = {3, -1, -1, -1, 1, 1, 1, -3};
              double lerr = 0.0;
              for (int k = 0; k < 8; ++k) {
                lerr = std::max(lerr, std::abs(l.thermal.matrix()(k, k).real() / a - before[k]));
                lerr = std::max(lerr, std::abs(l.relabeled.matrix()(k, k).real() / a - after[k]));
              }
              const auto sp = spatial_average(fixtures::chloroform());
              const Matrix target = sp.scale * effective_pure_target(2, 0).matrix();
              const double serr = (sp.output.matrix() - target).norm() / target.norm();
              bool bound = true;
              for (int n = 1; n <= 8; ++n) {
                const PrepCost c = prep_cost(PrepScheme::Temporal, n);
                bound &= c.experiments >= c.experiment_bound &&
                         c.experiment_bound == ((std::size_t{1} << n) - 1 + static_cast<std::size_t>(n) - 1) / static_cast<std::size_t>(n);
              }
              o.detail << " temporal exact " << (temporal_exact ? "yes" : "no") << ", logical list error " << lerr
                       << ", spatial relative error " << serr << ", bound " << (bound ? "ok" : "violated");
              o.check(temporal_exact, "temporal");
              o.check(lerr < 1e-12, "logical");
              o.check(serr < 1e-8, "spatial");
              o.check(bound, "bound");
            });

  criterion(7, "Spectral signature: one line above threshold per multiplet, n = 2..4, all basis states", 120.0,
            [](Outcome &o) {
              int violations = 0, checked = 0;
              for (int n = 2; n <= 4; ++n) {
                const SpinSystem sys = fixtures::coupled_spins(n);
                for (std::size_t s = 0; s < (std::size_t{1} << n); ++s) {
                  for (const SpinReadout &r : read_out(effective_pure_target(n, s), sys, all_spins(n))) {
                    int present = 0;
                    std::string present_label;
                    for (const LineEntry &l : r.bits.lines)
                      if (l.present) {
                        ++present;
                        present_label = l.label;
                      }
                    std::string want;
                    for (int t = 0; t < n; ++t)
                      if (t != r.bits.spin) want.push_back(spin_bit(s, t, n) ? '1' : '0');
                    ++checked;
                    if (present != 1 || present_label != want) ++violations;
                  }
                }
              }
              o.detail << " multiplets checked " << checked << ", violations " << violations;
              o.check(violations == 0, "signature");
            });

  criterion(8, "Grover read-out at pulse level: four marked items decode to 00/01/10/11 (< 5 s)", 5.0, [](Outcome &o) {
    const SpinSystem sys = fixtures::chloroform();
    std::string decoded;
    bool lines_ok = true;
    for (int m = 0; m < 4; ++m) {
      const PulseSequence seq = compile_circuit(grover_2q(m), sys);
      const SimResult res = simulate(seq, effective_pure_target(2, 0), sys);
      AcquireOptions ao;
      ao.frames_deg = res.frames_deg;
      const auto ro = read_out(res.final_state, sys, {0, 1}, ao);
      std::string word;
      for (const SpinReadout &r : ro) {
        word.push_back(r.bits.verdict == BitVerdict::One ? '1' : r.bits.verdict == BitVerdict::Zero ? '0' : '?');
        // Line position: the surviving line is the one labeled with the other bit.
        const int other = 1 - r.bits.spin;
        const char want = spin_bit(static_cast<std::size_t>(m), other, 2) ? '1' : '0';
        for (const LineEntry &l : r.bits.lines) lines_ok &= l.present == (l.label[0] == want);
      }
      decoded += (m ? "," : "") + word;
    }
    o.detail << " decoded " << decoded;
    o.check(decoded == "00,01,10,11", "bits");
    o.check(lines_ok, "line positions");
  });

  criterion(9, "Tomography of 50 random deviation states (n <= 3): trace distance < 1e-6, experiments <= 4^n", 120.0,
            [](Outcome &o) {
              std::mt19937_64 rng(kDefaultSeed);
              double worst = 0.0;
              bool count_ok = true;
              for (int k = 0; k < 50; ++k) {
                const int n = 1 + k % 3;
                const DensityMatrix rho = fixtures::random_deviation(n, rng);
                const auto t = tomography([&] { return rho; }, n);
                worst = std::max(worst, distance(t.state, rho).trace_distance);
                count_ok &= t.experiments <= (std::size_t{1} << (2 * n));
              }
              o.detail << " worst trace distance " << worst;
              o.check(worst < 1e-6, "reconstruction");
              o.check(count_ok, "experiment count");
            });

  criterion(10, "Bloch-Siegert: spectator phase within 15% of estimate (dw/w1 >= 5); compensation >= 10x", 120.0,
            [](Outcome &o) {
              const double amp = 1000.0, duration = 1e-3;
              for (double ratio : {5.0, 10.0, 20.0}) {
                const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 0, "channel": "1H"}, {"offset_hz": )" +
                                                   std::to_string(ratio * amp) + R"(, "channel": "1H"}]})");
                PulseSequence seq(2);
                seq.add(SoftPulse{"1H", 0.0, amp, duration, 0.0});
                const DensityMatrix ix(spin_operator(SpinAxis::X, 1, 2), Representation::Deviation);
                const double measured = line_phase_deg(simulate(seq, ix, sys).logical_state(), 1);
                const double predicted = bloch_siegert_phase(std::get<SoftPulse>(seq.events()[0]), ratio * amp);
                const double residual =
                    line_phase_deg(simulate(compensate(seq, sys), ix, sys).logical_state(), 1);
                const double rel = std::abs(std::abs(measured) - std::abs(predicted)) / std::abs(predicted);
                o.detail << " dw/w1=" << ratio << ": sim " << measured << " deg, estimate " << predicted
                         << " deg, compensated " << residual << " deg;";
                o.check(rel < 0.15, "estimate at ratio " + std::to_string(ratio));
                o.check(std::abs(residual) * 10.0 <= std::abs(measured), "compensation at ratio " + std::to_string(ratio));
              }
            });

  criterion(11, "Error rate 1/(2 J T2) in the 0.1%-1% band; threshold 1e-5", 1.0, [](Outcome &o) {
    // Fixtures with J in [50, 500] Hz, T2 in [1, 2] s and J*T2 <= 500.
    const std::pair<double, double> fixtures[] = {{50, 1}, {100, 1}, {215, 1}, {500, 1}, {50, 2}, {100, 2}, {250, 2}};
    double lo = 1.0, hi = 0.0;
    for (auto [j, t2] : fixtures) {
      const double r = error_rate(j, t2);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    o.detail << " rates " << lo * 100 << "% .. " << hi * 100 << "%";
    o.check(lo >= 1e-3 - 1e-15 && hi <= 1e-2 + 1e-15, "band");
    o.check(threshold_check(1e-5) && !threshold_check(2e-5) && threshold_check(1e-6) && !threshold_check(hi),
            "threshold");
  });

  criterion(12, "Property suites (unitarity, PO round trip, identity invariance, routing, compiler, soft->hard)", 300.0,
            [](Outcome &o) {
              std::mt19937_64 rng(kDefaultSeed);
              // Unitarity / trace / Hermiticity.
              double prop_err = 0.0;
              for (int k = 0; k < 10; ++k) {
                const int n = 2 + k % 3;
                const SpinSystem sys = fixtures::coupled_spins(n);
                PulseSequence seq(n);
                std::uniform_real_distribution<double> ang(0, 360), t(0, 0.01);
                for (int e = 0; e < 8; ++e) {
                  seq.add(HardPulse{{e % n}, ang(rng), ang(rng)});
                  seq.add(Delay{t(rng)});
                  seq.add(FrameShift{(e + 1) % n, ang(rng)});
                }
                const DensityMatrix rho = fixtures::random_full(n, rng);
                const DensityMatrix out = simulate(seq, rho, sys).final_state;
                prop_err = std::max(prop_err, unitarity_error(sequence_propagator(seq, sys).physical));
                prop_err = std::max(prop_err, std::abs(out.matrix().trace().real() - 1.0));
                prop_err = std::max(prop_err, hermiticity_error(out.matrix()));
              }
              // Product-operator round trip.
              double po_err = 0.0;
              for (int n = 1; n <= 4; ++n) {
                const DensityMatrix rho = fixtures::random_deviation(n, rng);
                po_err = std::max(po_err, (from_product_operators(to_product_operators(rho), Representation::Deviation).matrix() -
                                           rho.matrix())
                                              .cwiseAbs()
                                              .maxCoeff());
              }
              // Identity component invariance.
              const DensityMatrix full = fixtures::random_full(3, rng);
              Eigen::SelfAdjointEigenSolver<Matrix> es(fixtures::random_hermitian(3, rng, false));
              const Matrix u = es.eigenvectors();
              const Matrix shifted = u * (full.matrix() + 0.3 * Matrix::Identity(8, 8)) * u.adjoint() - 0.3 * Matrix::Identity(8, 8);
              const double id_err = (shifted - apply_unitary(u, full).matrix()).cwiseAbs().maxCoeff();
              // Routing: spectators untouched (routed unitary equals the embedded CNOT).
              const SpinSystem chain = fixtures::coupled_spins(5, true);
              double route_err = 0.0;
              for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b)
                  if (a != b)
                    route_err = std::max(route_err, (circuit_unitary(route_cnot(a, b, chain)) - gate_matrix(Cnot{a, b}, 5)).norm());
              // Compiler master property.
              double comp_err = 0.0;
              SimOptions ideal;
              ideal.pulse_model = PulseModel::Ideal;
              for (int trial = 0; trial < 60; ++trial) {
                const int n = 2 + trial % 3;
                const SpinSystem sys = fixtures::coupled_spins(n, trial % 2 == 1);
                std::uniform_int_distribution<int> spin(0, n - 1), kind(0, 6), len(1, 20);
                std::uniform_real_distribution<double> ang(-180, 180);
                Circuit c(n);
                const int gates = len(rng);
                for (int g = 0; g < gates; ++g) {
                  int a = spin(rng), b = spin(rng);
                  while (b == a) b = spin(rng);
                  switch (kind(rng)) {
                    case 0: c.add(Rotation{a, RotationAxis::Azimuth, ang(rng), ang(rng)}); break;
                    case 1: c.add(Rotation{a, RotationAxis::Z, ang(rng)}); break;
                    case 2: c.add(Hadamard{a}); break;
                    case 3: c.add(Cnot{a, b}); break;
                    case 4: c.add(Inept{a, b}); break;
                    case 5: c.add(QftBlock{{a, b}, FourierSign::Minus}); break;
                    default: c.add(ControlledPhase{a, b, ang(rng)}); break;
                  }
                }
                const PulseSequence seq = compile_circuit(c, sys);
                comp_err = std::max(comp_err, phase_aligned_distance(sequence_propagator(seq, sys, ideal).logical, circuit_unitary(c)));
              }
              // Soft -> hard convergence over three decades of amplitude.
              const SpinSystem pair = fixtures::chloroform();
              PulseSequence hard(2);
              hard.add(HardPulse{{0}, 90, 0});
              const Matrix target = sequence_propagator(hard, pair).logical;
              std::vector<double> soft_err;
              for (double amp : {1e3, 1e4, 1e5}) {
                PulseSequence soft(2);
                soft.add(SoftPulse{"1H", 0.0, amp, 0.25 / amp, 0});
                soft_err.push_back(phase_aligned_distance(sequence_propagator(soft, pair).logical, target));
              }
              const bool monotone = soft_err[0] > soft_err[1] && soft_err[1] > soft_err[2];
              o.detail << " unitarity/trace/herm " << prop_err << ", PO round trip " << po_err << ", identity " << id_err
                       << ", routing " << route_err << ", compiler " << comp_err << ", soft->hard " << soft_err[0] << " > "
                       << soft_err[1] << " > " << soft_err[2];
              o.check(prop_err < 1e-10, "unitarity");
              o.check(po_err < 1e-12, "round trip");
              o.check(id_err < 1e-10, "identity");
              o.check(route_err < 1e-12, "routing");
              o.check(comp_err < 1e-8, "compiler");
              o.check(monotone, "soft->hard");
            });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << "\n";
  return failures;
}
