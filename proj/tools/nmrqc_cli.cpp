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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nmrqc/algorithms.hpp"
#include "nmrqc/error.hpp"
#include "nmrqc/evolution.hpp"
#include "nmrqc/pulse_compiler.hpp"
#include "nmrqc/readout.hpp"
#include "nmrqc/state_prep.hpp"

namespace fs = std::filesystem;
using namespace nmrqc;

namespace {

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const fs::path &path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  return out;
}

std::map<std::string, std::string> parse_params(const std::vector<std::string> &items) {
  std::map<std::string, std::string> out;
  for (const std::string &item : items) {
    std::stringstream ss(item);
    for (std::string kv; std::getline(ss, kv, ',');) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error("invalid_params", "expected key=value, got '" + kv + "'");
      out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  return out;
}

std::uint64_t param_u64(const std::map<std::string, std::string> &p, const std::string &key, std::uint64_t fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    return std::stoull(it->second);
  } catch (const std::exception &) {
    throw Error("invalid_params", "parameter '" + key + "' must be a nonnegative integer");
  }
}

std::vector<int> parse_spin_list(const std::string &text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception &) {
      throw Error("invalid_spins", "bad spin index '" + tok + "'");
    }
  }
  return out;
}

void print_frames(std::ostream &out, const std::vector<double> &frames) {
  const auto old = out.precision(17);
  out << "frames_deg";
  for (double f : frames) out << ' ' << f;
  out << "\n";
  out.precision(old);
}

void export_readout(const fs::path &dir, const std::vector<SpinReadout> &ro) {
  std::vector<BitDecoding> bits;
  for (const SpinReadout &r : ro) {
    const std::string tag = "spin" + std::to_string(r.bits.spin);
    auto fid = open_out(dir / ("fid_" + tag + ".csv"));
    write_fid_csv(fid, r.fid);
    auto spec = open_out(dir / ("spectrum_" + tag + ".csv"));
    write_spectrum_csv(spec, r.spectrum);
    bits.push_back(r.bits);
  }
  auto lines = open_out(dir / "lines.csv");
  write_line_table(lines, bits);
}

void report_readout(std::ostream &out, const std::vector<SpinReadout> &ro) {
  std::vector<BitDecoding> bits;
  std::string word;
  for (const SpinReadout &r : ro) {
    bits.push_back(r.bits);
    if (r.fid.aliasing_warning) out << "warning aliasing spin " << r.bits.spin << "\n";
    switch (r.bits.verdict) {
      case BitVerdict::Zero: word.push_back('0'); break;
      case BitVerdict::One: word.push_back('1'); break;
      case BitVerdict::AveragedToZero: word.push_back('?'); break;
    }
  }
  write_line_table(out, bits);
  out << "decoded_bits " << word << "\n";
}

// Runs `circuit` on the effective pure ground state and reads the listed
// spins out, either at circuit level or through compile + simulate.
std::vector<SpinReadout> execute_and_read(const Circuit &circuit, const SpinSystem &sys, const std::vector<int> &spins,
                                          bool pulse_level) {
  const DensityMatrix start = effective_pure_target(sys.size(), 0);
  if (!pulse_level) return read_out(apply_circuit(circuit, start), sys, spins);
  const PulseSequence seq = compile_circuit(circuit, sys);
  const SimResult res = simulate(seq, start, sys);
  AcquireOptions opts;
  opts.frames_deg = res.frames_deg;
  return read_out(res.final_state, sys, spins, opts);
}

void print_distribution(std::ostream &out, const Circuit &circuit, const std::vector<int> &register_spins,
                        const std::string &mode, std::size_t shots, std::uint64_t seed) {
  const DensityMatrix pure = DensityMatrix::basis_state(circuit.qubits(), 0);
  const DensityMatrix final_state = apply_circuit(circuit, pure);
  if (mode == "sampled") {
    const SampledMeasurement m = measure_sampled(final_state, register_spins, shots, seed);
    out << "histogram";
    for (const auto &[v, c] : m.counts) out << ' ' << v << ':' << c;
    out << "\n";
  } else {
    const EnsembleMeasurement m = measure(final_state, register_spins);
    out << "probabilities";
    for (std::size_t v = 0; v < m.probabilities.size(); ++v)
      if (m.probabilities[v] > 1e-12) out << ' ' << v << ':' << m.probabilities[v];
    out << "\n";
  }
}

// Chloroform-like pair for two spins, otherwise a nearest-neighbour chain on
// one channel with well separated offsets.
SpinSystem default_system(int n) {
  if (n == 2)
    return load_system(R"({"spins": [{"label": "H", "offset_hz": 0, "channel": "1H"},
                                      {"label": "C", "offset_hz": 500, "channel": "13C"}],
                           "j_hz": [{"i": 0, "j": 1, "value": 215}]})");
  std::vector<Spin> spins;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    spins.push_back({"S" + std::to_string(k), 600.0 * k, "1H", std::nullopt, std::nullopt, 1e-5});
    if (k > 0) j(k - 1, k) = j(k, k - 1) = 40.0 + 10.0 * k;
  }
  return SpinSystem(std::move(spins), j);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"nmrqc: liquid-state NMR quantum computing simulator"};
  app.require_subcommand(1);

  std::string system_file, sequence_file, state_file, trajectory_dir, circuit_file, out_file, outdir;
  std::string scheme = "temporal", algorithm, mode = "ensemble", spins_text, convention = "-", input_file;
  std::vector<std::string> params;
  bool relax_flag = false, verify = false, pulse_level = false, ideal_pulses = false;
  std::size_t target = 0, shots = 100;
  std::uint64_t seed = kDefaultSeed;
  double threshold = kDefaultThreshold;

  auto *sim = app.add_subcommand("simulate", "Evolve a state under a pulse sequence");
  sim->add_option("--system", system_file, "Molecule JSON")->required();
  sim->add_option("--sequence", sequence_file, "Pulse sequence file")->required();
  sim->add_option("--state", state_file, "Initial density matrix (default: thermal deviation)");
  sim->add_flag("--relax", relax_flag, "Interleave T1/T2 relaxation");
  sim->add_flag("--ideal-pulses", ideal_pulses, "Treat soft pulses as ideal selective rotations");
  sim->add_option("--trajectory", trajectory_dir, "Write one state file per event into DIR");
  sim->add_option("--out", out_file, "Write the final state here instead of stdout");

  auto *comp = app.add_subcommand("compile", "Lower a circuit to a pulse sequence");
  comp->add_option("--system", system_file, "Molecule JSON")->required();
  comp->add_option("--circuit", circuit_file, "Circuit file")->required();
  comp->add_flag("--verify", verify, "Check the propagator against the circuit unitary");
  comp->add_option("--out", out_file, "Write the sequence here instead of stdout");

  auto *prep = app.add_subcommand("prepare", "Effective pure state preparation");
  prep->add_option("--system", system_file, "Molecule JSON")->required();
  prep->add_option("--scheme", scheme, "temporal | spatial | logical")
      ->check(CLI::IsMember({"temporal", "spatial", "logical"}));
  prep->add_option("--target", target, "Target basis state (temporal)");

  auto *run = app.add_subcommand("run", "Run an algorithm end to end");
  run->add_option("--system", system_file, "Molecule JSON (grover, dj; default: built-in molecule)");
  run->add_option("--algorithm", algorithm, "shor | grover | dj")
      ->required()
      ->check(CLI::IsMember({"shor", "grover", "dj"}));
  run->add_option("--params", params, "key=value[,key=value]: shor M,a,n1,n2; grover marked; dj f (truth table)");
  run->add_option("--mode", mode, "ensemble | sampled")->check(CLI::IsMember({"ensemble", "sampled"}));
  run->add_option("--shots", shots, "Shots in sampled mode");
  run->add_option("--seed", seed, "Random seed (default 20260101)");
  run->add_flag("--pulse-level", pulse_level, "Compile and simulate pulses instead of applying gates");
  std::string run_outdir = "nmrqc_run";
  run->add_option("--outdir", run_outdir, "Directory for FID/spectrum/line-table exports")->capture_default_str();

  auto *ro = app.add_subcommand("readout", "Spectra and bit verdicts for a state");
  ro->add_option("--system", system_file, "Molecule JSON")->required();
  ro->add_option("--state", state_file, "Density matrix file")->required();
  ro->add_option("--spins", spins_text, "Comma-separated spins to read")->required();
  ro->add_option("--threshold", threshold, "Averaged-to-zero threshold (fraction of a full line)");
  ro->add_option("--outdir", outdir, "Directory for FID/spectrum/line-table exports");
  bool raw = false;
  ro->add_flag("--raw", raw, "Do not rescale deviation states to pure-state amplitude");

  auto *tomo = app.add_subcommand("tomography", "Reconstruct the state a circuit prepares");
  tomo->add_option("--system", system_file, "Molecule JSON")->required();
  tomo->add_option("--circuit", circuit_file, "Circuit applied to the effective pure ground state")->required();

  auto *fft = app.add_subcommand("fft", "Reference discrete Fourier transform");
  fft->add_option("--convention", convention, "Exponent sign + or -")->check(CLI::IsMember({"+", "-"}));
  fft->add_option("--input", input_file, "One value per line: re [im]")->required();
  bool rescale = false;
  fft->add_flag("--rescale", rescale, "Divide the output by its first nonzero entry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    std::cout.precision(17);
    if (*sim) {
      const SpinSystem sys = load_system_file(system_file);
      auto seq_in = open_in(sequence_file);
      const PulseSequence seq = read_sequence(seq_in);
      DensityMatrix rho0 = thermal_deviation(sys, sys.thermal_weights());
      if (!state_file.empty()) {
        auto in = open_in(state_file);
        rho0 = read_density_matrix(in);
      }
      SimOptions opts;
      opts.relaxation = relax_flag;
      opts.pulse_model = ideal_pulses ? PulseModel::Ideal : PulseModel::Physical;
      if (!trajectory_dir.empty()) opts.trajectory = TrajectoryCapture::PerEvent;
      const SimResult res = simulate(seq, rho0, sys, opts);
      for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
        auto out = open_out(fs::path(trajectory_dir) / ("event_" + std::to_string(k) + ".txt"));
        write_density_matrix(out, res.trajectory[k]);
      }
      if (out_file.empty()) {
        write_density_matrix(std::cout, res.final_state);
      } else {
        auto out = open_out(out_file);
        write_density_matrix(out, res.final_state);
      }
      print_frames(std::cout, res.frames_deg);
    } else if (*comp) {
      const SpinSystem sys = load_system_file(system_file);
      auto in = open_in(circuit_file);
      const Circuit circuit = read_circuit(in);
      const PulseSequence seq = compile_circuit(circuit, sys);
      if (out_file.empty()) {
        write_sequence(std::cout, seq);
      } else {
        auto out = open_out(out_file);
        write_sequence(out, seq);
      }
      if (verify) {
        const SequencePropagator p = sequence_propagator(seq, sys);
        std::cout << "fidelity_error " << phase_aligned_distance(p.logical, circuit_unitary(circuit)) << "\n";
      }
    } else if (*prep) {
      const SpinSystem sys = load_system_file(system_file);
      const PrepScheme s = parse_scheme(scheme);
      std::cout << "scheme " << to_string(s) << "\n";
      std::optional<DensityMatrix> state;
      double residual = 0.0;
      if (s == PrepScheme::Temporal) {
        const TemporalAverage t = temporal_average(sys, target);
        for (std::size_t k = 0; k < t.circuits.size(); ++k) {
          std::cout << "# experiment " << k << "\n";
          write_circuit(std::cout, t.circuits[k]);
        }
        std::cout << "target_scale " << t.scale << "\n";
        residual = t.residual;
        state = t.combined;
      } else if (s == PrepScheme::Spatial) {
        const SpatialAverage a = spatial_average(sys);
        write_sequence(std::cout, a.sequence);
        std::cout << "target_scale " << a.scale << "\n";
        residual = a.residual;
        state = a.output;
      } else {
        const LogicalLabel l = logical_label(sys);
        write_circuit(std::cout, l.circuit);
        std::cout << "condition spin " << l.condition_spin << " = " << l.condition_value << "; subsystem";
        for (int sp : l.subsystem) std::cout << ' ' << sp;
        std::cout << "\n";
        state = l.relabeled;
      }
      const PrepCost cost = prep_cost(s, sys.size());
      std::cout << "experiments " << cost.experiments << "\n"
                << "experiment_bound " << cost.experiment_bound << "\n"
                << "signal_scale " << cost.signal_scale << "\n"
                << "residual_norm " << residual << "\n";
      write_density_matrix(std::cout, *state);
    } else if (*run) {
      const auto p = parse_params(params);
      if (algorithm == "shor") {
        if (pulse_level) throw Error("pulse_level_unsupported", "shor runs at circuit level only");
        PeriodFindingProblem prob;
        prob.modulus = param_u64(p, "M", 15);
        prob.base = param_u64(p, "a", 7);
        prob.n1 = static_cast<int>(param_u64(p, "n1", 8));
        prob.n2 = static_cast<int>(param_u64(p, "n2", 4));
        PeriodFindingOptions opts;
        opts.mode = mode == "sampled" ? MeasurementMode::Sampled : MeasurementMode::Ensemble;
        opts.shots = shots;
        opts.seed = seed;
        write_result(std::cout, period_find(prob, opts));
      } else {
        Circuit circuit(1);
        std::vector<int> spins;
        if (algorithm == "grover") {
          circuit = grover_2q(static_cast<int>(param_u64(p, "marked", 0)));
          spins = {0, 1};
        } else {
          const auto it = p.find("f");
          if (it == p.end()) throw Error("invalid_params", "dj needs f=<truth table bits>");
          std::vector<int> f;
          for (char ch : it->second) {
            if (ch != '0' && ch != '1') throw Error("invalid_params", "truth table must be 0/1 characters");
            f.push_back(ch - '0');
          }
          circuit = deutsch_jozsa(f);
          for (int s = 0; s + 1 < circuit.qubits(); ++s) spins.push_back(s);
        }
        const SpinSystem sys = system_file.empty() ? default_system(circuit.qubits()) : load_system_file(system_file);
        if (circuit.qubits() != sys.size())
          throw Error("dimension_mismatch", "system must have " + std::to_string(circuit.qubits()) + " spins");
        print_distribution(std::cout, circuit, spins, mode, shots, seed);
        const auto readout = execute_and_read(circuit, sys, spins, pulse_level);
        report_readout(std::cout, readout);
        if (!run_outdir.empty()) export_readout(run_outdir, readout);
      }
    } else if (*ro) {
      const SpinSystem sys = load_system_file(system_file);
      auto in = open_in(state_file);
      DensityMatrix rho = read_density_matrix(in);
      if (rho.is_deviation() && !raw) {
        // c (|s><s| - I/2^n) has eigenvalue spread c; divide it out so the
        // threshold is relative to a pure-state line.
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
        const double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
        if (spread > 0.0) rho = rho.scaled(1.0 / spread);
      }
      const auto readout = read_out(rho, sys, parse_spin_list(spins_text), {}, threshold);
      report_readout(std::cout, readout);
      if (!outdir.empty()) export_readout(outdir, readout);
    } else if (*tomo) {
      const SpinSystem sys = load_system_file(system_file);
      auto in = open_in(circuit_file);
      const Circuit circuit = read_circuit(in);
      const DensityMatrix start = effective_pure_target(sys.size(), 0);
      const PulseSequence seq = compile_circuit(circuit, sys);
      const DensityMatrix prepared = simulate(seq, start, sys).logical_state();
      const TomographyResult t = tomography([&] { return prepared; }, sys.size());
      write_density_matrix(std::cout, t.state);
      std::cout << "experiments " << t.experiments << "\n"
                << "condition_number " << t.condition_number << "\n"
                << "trace_distance " << distance(t.state, apply_circuit(circuit, start)).trace_distance << "\n";
    } else if (*fft) {
      auto in = open_in(input_file);
      std::vector<Complex> x;
      for (std::string line; std::getline(in, line);) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double re = 0.0, im = 0.0;
        if (!(ls >> re)) continue;
        ls >> im;
        x.emplace_back(re, im);
      }
      if (x.empty()) throw Error("invalid_format", "input has no values");
      std::vector<Complex> y = fft_reference(x, convention == "+" ? FourierSign::Plus : FourierSign::Minus);
      if (rescale) {
        Complex first = 0.0;
        for (const Complex &v : y)
          if (std::abs(v) > 1e-12) {
            first = v;
            break;
          }
        if (std::abs(first) > 0.0)
          for (Complex &v : y) v /= first;
      }
      for (Complex &v : y) {
        if (std::abs(v.real()) < 1e-15) v.real(0.0);
        if (std::abs(v.imag()) < 1e-15) v.imag(0.0);
        std::cout << v.real() << ' ' << v.imag() << "\n";
      }
    }
  } catch (const Error &e) {
    std::cerr << "error code=" << e.code() << " message=\"" << e.what() << "\"\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error code=internal message=\"" << e.what() << "\"\n";
    return 3;
  }
  return 0;
}
