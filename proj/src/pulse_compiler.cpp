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

#include "nmrqc/pulse_compiler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

#include "nmrqc/error.hpp"
#include "nmrqc/evolution.hpp"

namespace nmrqc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool is_two_spin(const Gate &g) {
  return std::holds_alternative<Cnot>(g) || std::holds_alternative<Inept>(g) ||
         std::holds_alternative<ControlledPhase>(g);
}

Gate with_pair(const Gate &g, int a, int b) {
  if (std::holds_alternative<Cnot>(g)) return Cnot{a, b};
  if (std::holds_alternative<Inept>(g)) return Inept{a, b};
  if (const auto *c = std::get_if<ControlledPhase>(&g)) return ControlledPhase{a, b, c->angle_deg};
  throw Error("unsupported_gate", "only two-spin gates can be routed");
}

void hard(PulseSequence &seq, int spin, double angle, double phase) {
  seq.add(HardPulse{{spin}, angle, phase});
}

// Appends exp(-i Θ Iz_a Iz_b) (up to global phase) built from the a-b
// coupling: a delay of (σΘ mod 2π)/(2π|J|), plus z180 on both spins when
// the remainder differs by an odd multiple of 2π.
void coupling_evolution(PulseSequence &seq, int a, int b, double theta_rad, const SpinSystem &sys,
                        const CompileOptions &options) {
  const double j = sys.coupling_hz(a, b);
  if (j == 0.0)
    throw Error("missing_coupling", "spins " + std::to_string(a) + " and " + std::to_string(b) +
                                        " are not coupled");
  const double signed_theta = j > 0.0 ? theta_rad : -theta_rad;
  double x = std::fmod(signed_theta, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  if (kTwoPi - x < 1e-12) x = 0.0;
  const auto k = static_cast<long long>(std::llround((signed_theta - x) / kTwoPi));
  if (k % 2 != 0) {
    seq.add(FrameShift{a, 180.0});
    seq.add(FrameShift{b, 180.0});
  }
  if (x < 1e-15) return;
  const double t = x / (kTwoPi * std::abs(j));
  if (options.refocus)
    seq.append(refocus(t, {a, b}, sys));
  else
    seq.add(Delay{t});
}

void emit(const Gate &g, const SpinSystem &sys, const CompileOptions &options, PulseSequence &seq);

void emit_circuit(const Circuit &c, const SpinSystem &sys, const CompileOptions &options,
                  PulseSequence &seq) {
  for (const Gate &g : c.gates()) emit(g, sys, options, seq);
}

void emit(const Gate &g, const SpinSystem &sys, const CompileOptions &options, PulseSequence &seq) {
  validate_gate(g, sys.size());
  if (is_two_spin(g)) {
    const std::vector<int> s = gate_spins(g);
    if (sys.coupling_hz(s[0], s[1]) == 0.0) {
      if (!options.route)
        throw Error("missing_coupling", "spins " + std::to_string(s[0]) + " and " +
                                            std::to_string(s[1]) + " are not coupled");
      emit_circuit(route_gate(g, sys), sys, options, seq);
      return;
    }
  }
  std::visit(
      Overloaded{
          [&](const Rotation &r) {
            if (r.axis == RotationAxis::Z)
              seq.add(FrameShift{r.spin, r.angle_deg});
            else
              hard(seq, r.spin, r.angle_deg, r.phase_deg());
          },
          [&](const Hadamard &h) {
            hard(seq, h.spin, 90.0, 90.0);
            hard(seq, h.spin, 180.0, 0.0);
          },
          [&](const Cnot &c) {
            seq.add(FrameShift{c.control, 90.0});
            seq.add(FrameShift{c.target, -90.0});
            hard(seq, c.target, 90.0, 0.0);
            coupling_evolution(seq, c.control, c.target, kPi, sys, options);
            hard(seq, c.target, 90.0, -90.0);
          },
          [&](const Inept &c) {
            hard(seq, c.target, 90.0, 0.0);
            coupling_evolution(seq, c.control, c.target, kPi, sys, options);
            hard(seq, c.target, 90.0, -90.0);
          },
          [&](const ControlledPhase &c) {
            // |11><11| = 1/4 - Iz_a/2 - Iz_b/2 + Iz_a Iz_b.
            seq.add(FrameShift{c.a, c.angle_deg / 2.0});
            seq.add(FrameShift{c.b, c.angle_deg / 2.0});
            coupling_evolution(seq, c.a, c.b, -deg_to_rad(c.angle_deg), sys, options);
          },
          [&](const Permutation &p) {
            const auto gates = synthesize_affine(p);
            if (!gates)
              throw Error("unsupported_gate", "permutation is not affine over GF(2); no CNOT/NOT synthesis");
            for (const Gate &sub : *gates) emit(sub, sys, options, seq);
          },
          [&](const QftBlock &q) { emit_circuit(qft_circuit(q.spins, q.sign, sys.size()), sys, options, seq); },
      },
      g);
}

}  // namespace

std::vector<double> track_frames(const PulseSequence &seq, const SpinSystem &sys) {
  std::vector<double> frames(static_cast<std::size_t>(sys.size()), 0.0);
  for (const PulseEvent &e : seq.events()) advance_frames(e, sys, frames);
  return frames;
}

PulseSequence compile_gate(const Gate &g, const SpinSystem &sys, const CompileOptions &options) {
  validate_gate(g, sys.size());
  if (is_two_spin(g)) {
    const std::vector<int> s = gate_spins(g);
    if (sys.coupling_hz(s[0], s[1]) == 0.0)
      throw Error("missing_coupling", "spins " + std::to_string(s[0]) + " and " + std::to_string(s[1]) +
                                          " are not coupled; route the gate first");
  }
  PulseSequence seq(sys.size());
  emit(g, sys, options, seq);
  seq.set_frames_deg(track_frames(seq, sys));
  return seq;
}

PulseSequence compile_circuit(const Circuit &c, const SpinSystem &sys, const CompileOptions &options) {
  if (c.qubits() != sys.size())
    throw Error("dimension_mismatch", "circuit and system differ in spin count");
  PulseSequence seq(sys.size());
  emit_circuit(c, sys, options, seq);
  seq.set_frames_deg(track_frames(seq, sys));
  return seq;
}

PulseSequence refocus(double delay_s, std::pair<int, int> active_pair, const SpinSystem &sys) {
  const int n = sys.size();
  const auto [a, b] = active_pair;
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw Error("index_out_of_range", "invalid active pair");
  if (delay_s < 0.0) throw Error("invalid_duration", "delay must be nonnegative");
  PulseSequence seq(n);
  std::vector<int> spectators;
  for (int s = 0; s < n; ++s)
    if (s != a && s != b && !sys.neighbors(s).empty()) spectators.push_back(s);
  if (spectators.empty() || delay_s == 0.0) {
    seq.add(Delay{delay_s});
    return seq;
  }
  std::size_t segments = 1;
  while (segments < spectators.size() + 1) segments <<= 1;
  // Sylvester Hadamard entry H[row][col] = (-1)^popcount(row & col).
  auto sign = [](std::size_t row, std::size_t col) { return std::popcount(row & col) % 2 == 0 ? 1 : -1; };
  const double seg = delay_s / static_cast<double>(segments);
  std::vector<int> current(spectators.size(), 1);
  for (std::size_t col = 0; col < segments; ++col) {
    HardPulse flips{{}, 180.0, 0.0};
    for (std::size_t j = 0; j < spectators.size(); ++j) {
      const int want = sign(j + 1, col);
      if (want != current[j]) {
        flips.spins.push_back(spectators[j]);
        current[j] = want;
      }
    }
    if (!flips.spins.empty()) seq.add(flips);
    seq.add(Delay{seg});
  }
  HardPulse restore{{}, 180.0, 0.0};
  for (std::size_t j = 0; j < spectators.size(); ++j)
    if (current[j] != 1) restore.spins.push_back(spectators[j]);
  if (!restore.spins.empty()) seq.add(restore);
  return seq;
}

std::vector<int> coupling_path(int from, int to, const SpinSystem &sys) {
  const int n = sys.size();
  if (from < 0 || to < 0 || from >= n || to >= n) throw Error("index_out_of_range", "spin out of range");
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::deque<int> queue{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int w : sys.neighbors(v))
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        parent[static_cast<std::size_t>(w)] = v;
        queue.push_back(w);
      }
  }
  if (!seen[static_cast<std::size_t>(to)])
    throw Error("disconnected", "no coupling path between spins " + std::to_string(from) + " and " +
                                    std::to_string(to));
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[static_cast<std::size_t>(path.back())]);
  std::reverse(path.begin(), path.end());
  return path;
}

Circuit route_gate(const Gate &g, const SpinSystem &sys) {
  if (!is_two_spin(g)) throw Error("unsupported_gate", "only two-spin gates can be routed");
  validate_gate(g, sys.size());
  const std::vector<int> s = gate_spins(g);
  const std::vector<int> path = coupling_path(s[0], s[1], sys);
  Circuit c(sys.size());
  const std::size_t k = path.size() - 1;
  for (std::size_t i = 0; i + 1 < k; ++i) append_swap(c, path[i], path[i + 1]);
  c.add(with_pair(g, path[k - 1], path[k]));
  for (std::size_t i = k - 1; i-- > 0;) append_swap(c, path[i], path[i + 1]);
  return c;
}

Circuit route_cnot(int control, int target, const SpinSystem &sys) {
  return route_gate(Cnot{control, target}, sys);
}

double bloch_siegert_phase(const SoftPulse &p, double spectator_offset_hz) {
  if (p.amplitude_hz == 0.0 || p.duration_s == 0.0) return 0.0;
  const double delta_hz = spectator_offset_hz - p.carrier_hz;
  if (std::abs(delta_hz) <= p.amplitude_hz)
    throw Error("on_resonance", "spectator within the pulse bandwidth; second-order estimate invalid");
  const double w1 = kTwoPi * p.amplitude_hz;
  return rad_to_deg(w1 * w1 * p.duration_s / (2.0 * kTwoPi * delta_hz));
}

PulseSequence compensate(const PulseSequence &seq, const SpinSystem &sys) {
  PulseSequence out(seq.spins());
  for (const PulseEvent &e : seq.events()) {
    out.add(e);
    const auto *p = std::get_if<SoftPulse>(&e);
    if (!p) continue;
    const int ref = soft_pulse_reference(*p, sys);
    for (int s : sys.spins_on_channel(p->channel))
      if (s != ref) {
        const double phase = bloch_siegert_phase(*p, sys.offset_hz(s));
        if (phase != 0.0) out.add(FrameShift{s, -phase});
      }
  }
  out.set_frames_deg(track_frames(out, sys));
  return out;
}

}  // namespace nmrqc
