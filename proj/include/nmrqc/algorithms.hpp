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
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "nmrqc/gates.hpp"

namespace nmrqc {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

/// Order finding for f(x) = base^x mod modulus. The period is the unknown and
/// is not stored.
struct PeriodFindingProblem {
  std::uint64_t modulus = 15;
  std::uint64_t base = 7;
  int n1 = 8;
  int n2 = 4;
};

/// Throws on gcd(base, M) != 1 or register sizes below 2⌈log2 M⌉ / ⌈log2 M⌉.
void validate(const PeriodFindingProblem &p);

/// f(x) = base^x mod M for x in [0, 2^n1).
std::vector<std::size_t> modexp_table(const PeriodFindingProblem &p);

/// |x>|y> -> |x>|y ⊕ f(x)> on spins [0, n1) (register 1) and [n1, n1+n2).
Circuit oracle_circuit(const std::vector<std::size_t> &f, int n1, int n2);

enum class MeasurementMode { Ensemble, Sampled };

struct PeriodFindingOptions {
  MeasurementMode mode = MeasurementMode::Ensemble;
  std::size_t shots = 100;
  std::uint64_t seed = kDefaultSeed;
  /// Measure register 2 before the QFT; the register-1 statistics are the
  /// same either way.
  bool measure_register2 = false;
  FourierSign sign = kDefaultFourierSign;
};

struct PeriodFindingResult {
  int n1 = 0;
  /// Exact register-1 outcome probabilities (length 2^n1).
  std::vector<double> probabilities;
  /// Sampled mode only: outcome -> count.
  std::map<std::size_t, std::size_t> histogram;
  /// Verified period (f(r) = f(0)) with the largest success weight.
  std::optional<std::uint64_t> period;
  /// Probability (ensemble) or shot fraction (sampled) that a single run
  /// recovers a verified period.
  double success_probability = 0.0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> factors;
};

/// Superposition, oracle, optional register-2 measurement, QFT on register
/// 1. `modulus` bounds the continued-fraction denominators.
PeriodFindingResult period_find(const std::vector<std::size_t> &f, int n1, int n2,
                                std::uint64_t modulus,
                                const PeriodFindingOptions &options = {});
PeriodFindingResult period_find(const PeriodFindingProblem &p,
                                const PeriodFindingOptions &options = {});

/// Last continued-fraction convergent denominator of k/N not exceeding M;
/// nullopt for k = 0 (retry).
std::optional<std::uint64_t> recover_period(std::uint64_t k, std::uint64_t n,
                                            std::uint64_t modulus);

/// gcd(a^{r/2} ± 1, M) when r is even and a^{r/2} != -1 mod M and both
/// factors are nontrivial.
std::optional<std::pair<std::uint64_t, std::uint64_t>> extract_factors(
    std::uint64_t modulus, std::uint64_t base, std::uint64_t r);

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

/// One Grover iteration on two qubits; ends in |marked> up to global phase.
Circuit grover_2q(int marked);

/// Deutsch-Jozsa on `f` (table over 2^k inputs, values 0/1) with one ancilla
/// as the last spin. The query register is all zeros iff f is constant.
Circuit deutsch_jozsa(const std::vector<int> &f);

void write_result(std::ostream &out, const PeriodFindingResult &r);

}  // namespace nmrqc
