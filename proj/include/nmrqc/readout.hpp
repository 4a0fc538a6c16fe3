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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nmrqc/gates.hpp"
#include "nmrqc/quantum_state.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc {

struct AcquireOptions {
  /// Apply T2 decay of the coherences (requires T2 on every spin).
  bool relaxation = false;
  /// Software frame report; the receiver phase of spin s is R_s.
  std::vector<double> frames_deg;
  HamiltonianModel hamiltonian;
};

struct Fid {
  std::vector<int> spins;
  double dwell_s = 0.0;
  std::vector<Complex> samples;
  /// Set when a line of the observed spins falls outside ±1/(2 dwell).
  bool aliasing_warning = false;
};

/// Sample k = Σ_s e^{iR_s} Tr(ρ(k dwell) I+_s) under the internal Hamiltonian.
Fid acquire(const DensityMatrix &rho, const SpinSystem &sys, const std::vector<int> &spins,
            double dwell_s, std::size_t npoints, const AcquireOptions &options = {});

/// Dwell and length that resolve every multiplet of `sys`: the resolution
/// divides the line positions where possible and the width covers them.
std::pair<double, std::size_t> default_acquisition(const SpinSystem &sys);

struct Spectrum {
  std::vector<double> frequency_hz;
  std::vector<Complex> amplitude;
  double dwell_s = 0.0;
};

/// Forward transform with the exp(-2πi jk/N) sign, shifted so that bin
/// N/2 is zero frequency; +x magnetization gives positive real lines.
Spectrum spectrum(const Fid &fid);

struct LineEntry {
  int spin = 0;
  double frequency_hz = 0.0;
  std::string label;
  std::vector<int> neighbor_bits;
  /// Real part integrated over ±2 bins, relative to a ½-amplitude line.
  double amplitude = 0.0;
  bool present = false;
};

inline constexpr double kDefaultThreshold = 0.25;

/// Integrates every multiplet line of `spin`.
std::vector<LineEntry> assign_lines(const Spectrum &s, const SpinSystem &sys, int spin,
                                    double threshold = kDefaultThreshold);

enum class BitVerdict { Zero, One, AveragedToZero };
std::string_view to_string(BitVerdict v);

struct BitDecoding {
  int spin = 0;
  double integrated = 0.0;
  BitVerdict verdict = BitVerdict::AveragedToZero;
  std::vector<LineEntry> lines;
};

/// spectra[k] belongs to spins[k].
std::vector<BitDecoding> decode_bits(const std::vector<Spectrum> &spectra, const std::vector<int> &spins,
                                     const SpinSystem &sys, double threshold = kDefaultThreshold);

/// Per-line presence flags: which neighbour configurations are populated.
std::vector<LineEntry> decode_neighbors(const Spectrum &s, const SpinSystem &sys, int spin,
                                        double threshold = kDefaultThreshold);

struct SpinReadout {
  Fid fid;
  Spectrum spectrum;
  BitDecoding bits;
};

/// Ideal 90_y read-out on each listed spin in turn (one experiment per
/// spin), acquisition of that spin and bit decoding.
std::vector<SpinReadout> read_out(const DensityMatrix &rho, const SpinSystem &sys, const std::vector<int> &spins,
                                  const AcquireOptions &options = {}, double threshold = kDefaultThreshold);

struct EnsembleMeasurement {
  /// Register value (spins[0] most significant) -> probability.
  std::vector<double> probabilities;
  /// P(bit = 1) per register spin.
  std::vector<double> marginals;
};

struct SampledMeasurement {
  std::map<std::size_t, std::size_t> counts;
  std::vector<std::size_t> samples;
  /// State after the last shot, collapsed on the register.
  std::optional<DensityMatrix> collapsed;
};

EnsembleMeasurement measure(const DensityMatrix &rho, const std::vector<int> &spins);
SampledMeasurement measure_sampled(const DensityMatrix &rho, const std::vector<int> &spins, std::size_t shots,
                                   std::uint64_t seed);

struct TomographyOptions {
  /// Reconstruct z-order terms only from "90_y on spin s" experiments.
  bool diagonal_only = false;
};

struct TomographyResult {
  DensityMatrix state;
  std::size_t experiments = 0;
  double condition_number = 0.0;
  /// Read-out setting per experiment: one of "I", "X", "Y" per spin.
  std::vector<std::string> settings;
};

/// `experiment` is a repeatable source of the unknown state. Each setting of
/// {I, 90x, 90y}^n is applied ideally and every multiplet line of every spin
/// is observed; the product-operator coefficients follow by least squares.
TomographyResult tomography(const std::function<DensityMatrix()> &experiment, int n,
                            const TomographyOptions &options = {});

void write_fid_csv(std::ostream &out, const Fid &fid);
void write_spectrum_csv(std::ostream &out, const Spectrum &s);
void write_line_table(std::ostream &out, const std::vector<BitDecoding> &bits);

}  // namespace nmrqc
