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

#include "nmrqc/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "json.hpp"
#include "nmrqc/error.hpp"

namespace nmrqc {

namespace {

int ceil_log2(std::uint64_t m) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < m) ++bits;
  return bits;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  if (mod == 1) return 0;
  std::uint64_t result = 1;
  base %= mod;
  while (exp > 0) {
    if (exp & 1u) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

void validate(const PeriodFindingProblem &p) {
  if (p.modulus < 2) throw Error("invalid_problem", "modulus must be at least 2");
  if (p.base < 1 || std::gcd(p.base, p.modulus) != 1)
    throw Error("invalid_problem", "base must be coprime to the modulus");
  const int bits = ceil_log2(p.modulus);
  if (p.n2 < bits) throw Error("invalid_problem", "second register too small");
  if (p.n1 < 2 * bits) throw Error("invalid_problem", "first register must be at least twice as large");
  if (p.n1 + p.n2 > kMaxSpins) throw Error("too_many_spins", "registers exceed the qubit cap");
}

std::vector<std::size_t> modexp_table(const PeriodFindingProblem &p) {
  const std::size_t size = std::size_t{1} << p.n1;
  std::vector<std::size_t> f(size);
  std::uint64_t v = 1 % p.modulus;
  for (std::size_t x = 0; x < size; ++x) {
    f[x] = static_cast<std::size_t>(v);
    v = mulmod(v, p.base, p.modulus);
  }
  return f;
}

Circuit oracle_circuit(const std::vector<std::size_t> &f, int n1, int n2) {
  if (n1 < 1 || n2 < 1 || n1 + n2 > kMaxSpins)
    throw Error("too_many_spins", "register sizes out of range");
  const std::size_t size1 = std::size_t{1} << n1;
  const std::size_t size2 = std::size_t{1} << n2;
  if (f.size() != size1) throw Error("invalid_oracle", "function table must have 2^n1 entries");
  Permutation p;
  for (int s = 0; s < n1 + n2; ++s) p.spins.push_back(s);
  p.map.resize(size1 * size2);
  for (std::size_t x = 0; x < size1; ++x) {
    if (f[x] >= size2)
      throw Error("invalid_oracle", "f(" + std::to_string(x) + ") exceeds register 2");
    for (std::size_t y = 0; y < size2; ++y) p.map[x * size2 + y] = x * size2 + (y ^ f[x]);
  }
  Circuit c(n1 + n2);
  c.add(std::move(p));
  return c;
}

std::optional<std::uint64_t> recover_period(std::uint64_t k, std::uint64_t n,
                                            std::uint64_t modulus) {
  if (n == 0 || k >= n) throw Error("invalid_outcome", "outcome must satisfy 0 <= k < N");
  if (k == 0) return std::nullopt;
  // Convergents h/q of k/N: q_j = a_j q_{j-1} + q_{j-2}.
  std::uint64_t num = k, den = n;
  std::uint64_t q_prev = 1, q = 0;
  std::uint64_t best = 0;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t q_next = a * q + q_prev;
    if (q_next > modulus) break;
    q_prev = q;
    q = q_next;
    best = q;
    const std::uint64_t rem = num % den;
    num = den;
    den = rem;
  }
  if (best == 0) return std::nullopt;
  return best;
}

std::optional<std::pair<std::uint64_t, std::uint64_t>> extract_factors(
    std::uint64_t modulus, std::uint64_t base, std::uint64_t r) {
  if (r == 0 || r % 2 != 0) return std::nullopt;
  const std::uint64_t half = powmod(base, r / 2, modulus);
  if (half == modulus - 1) return std::nullopt;
  const std::uint64_t f1 = std::gcd(half + modulus - 1, modulus);
  const std::uint64_t f2 = std::gcd(half + 1, modulus);
  if (f1 <= 1 || f1 >= modulus || f2 <= 1 || f2 >= modulus) return std::nullopt;
  return std::make_pair(std::min(f1, f2), std::max(f1, f2));
}

namespace {

// Register-1 distribution after the QFT for a fixed register-2 content;
// `psi` is the joint state.
std::vector<double> register1_distribution(Vector psi, int n1, int n2, FourierSign sign) {
  const int n = n1 + n2;
  std::vector<int> reg1(static_cast<std::size_t>(n1));
  std::iota(reg1.begin(), reg1.end(), 0);
  const Circuit qft = qft_circuit(reg1, sign, n);
  psi = apply_circuit(qft, psi);
  const std::size_t size1 = std::size_t{1} << n1;
  const std::size_t size2 = std::size_t{1} << n2;
  std::vector<double> p(size1, 0.0);
  for (std::size_t x = 0; x < size1; ++x)
    for (std::size_t y = 0; y < size2; ++y) p[x] += std::norm(psi(static_cast<Eigen::Index>(x * size2 + y)));
  return p;
}

}  // namespace

PeriodFindingResult period_find(const std::vector<std::size_t> &f, int n1, int n2,
                                std::uint64_t modulus,
                                const PeriodFindingOptions &options) {
  const Circuit oracle = oracle_circuit(f, n1, n2);
  const int n = n1 + n2;
  const std::size_t size1 = std::size_t{1} << n1;
  const std::size_t size2 = std::size_t{1} << n2;
  const std::size_t dim = std::size_t{1} << n;

  Vector psi = Vector::Zero(static_cast<Eigen::Index>(dim));
  const double amp = 1.0 / std::sqrt(static_cast<double>(size1));
  for (std::size_t x = 0; x < size1; ++x) psi(static_cast<Eigen::Index>(x * size2)) = amp;
  psi = apply_circuit(oracle, psi);

  PeriodFindingResult result;
  result.n1 = n1;
  if (options.measure_register2) {
    // Ensemble over the register-2 outcomes, each branch renormalised.
    result.probabilities.assign(size1, 0.0);
    for (std::size_t y = 0; y < size2; ++y) {
      Vector branch = Vector::Zero(static_cast<Eigen::Index>(dim));
      double weight = 0.0;
      for (std::size_t x = 0; x < size1; ++x) {
        const auto idx = static_cast<Eigen::Index>(x * size2 + y);
        branch(idx) = psi(idx);
        weight += std::norm(psi(idx));
      }
      if (weight <= 0.0) continue;
      branch /= std::sqrt(weight);
      const std::vector<double> p = register1_distribution(branch, n1, n2, options.sign);
      for (std::size_t x = 0; x < size1; ++x) result.probabilities[x] += weight * p[x];
    }
  } else {
    result.probabilities = register1_distribution(psi, n1, n2, options.sign);
  }

  // Classical post-processing: a candidate r is accepted when f(r) = f(0).
  auto verified = [&](std::size_t k) -> std::optional<std::uint64_t> {
    const auto r = recover_period(k, size1, modulus);
    if (!r || *r == 0 || *r >= size1 || f[*r] != f[0]) return std::nullopt;
    return r;
  };
  std::map<std::uint64_t, double> weight_of;
  if (options.mode == MeasurementMode::Ensemble) {
    for (std::size_t k = 0; k < size1; ++k) {
      if (result.probabilities[k] < 1e-14) continue;
      if (const auto r = verified(k)) {
        weight_of[*r] += result.probabilities[k];
        result.success_probability += result.probabilities[k];
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::discrete_distribution<std::size_t> draw(result.probabilities.begin(),
                                                 result.probabilities.end());
    std::size_t successes = 0;
    for (std::size_t shot = 0; shot < options.shots; ++shot) {
      const std::size_t k = draw(rng);
      ++result.histogram[k];
      if (const auto r = verified(k)) {
        weight_of[*r] += 1.0;
        ++successes;
      }
    }
    if (options.shots > 0)
      result.success_probability = static_cast<double>(successes) / static_cast<double>(options.shots);
  }
  if (!weight_of.empty()) {
    const auto best = std::max_element(weight_of.begin(), weight_of.end(),
                                       [](const auto &a, const auto &b) { return a.second < b.second; });
    result.period = best->first;
  }
  return result;
}

PeriodFindingResult period_find(const PeriodFindingProblem &p,
                                const PeriodFindingOptions &options) {
  validate(p);
  PeriodFindingResult r = period_find(modexp_table(p), p.n1, p.n2, p.modulus, options);
  if (r.period) r.factors = extract_factors(p.modulus, p.base, *r.period);
  return r;
}

Circuit grover_2q(int marked) {
  if (marked < 0 || marked > 3) throw Error("invalid_marked", "marked item must be in 0..3");
  Circuit c(2);
  auto flip_zero_bits = [&] {
    for (int s = 0; s < 2; ++s)
      if (spin_bit(static_cast<std::size_t>(marked), s, 2) == 0)
        c.add(Rotation{s, RotationAxis::X, 180.0, 0.0});
  };
  c.add(Hadamard{0}).add(Hadamard{1});
  flip_zero_bits();
  c.add(ControlledPhase{0, 1, 180.0});
  flip_zero_bits();
  // Inversion about the mean: H H X X CZ X X H H.
  c.add(Hadamard{0}).add(Hadamard{1});
  c.add(Rotation{0, RotationAxis::X, 180.0, 0.0}).add(Rotation{1, RotationAxis::X, 180.0, 0.0});
  c.add(ControlledPhase{0, 1, 180.0});
  c.add(Rotation{0, RotationAxis::X, 180.0, 0.0}).add(Rotation{1, RotationAxis::X, 180.0, 0.0});
  c.add(Hadamard{0}).add(Hadamard{1});
  return c;
}

Circuit deutsch_jozsa(const std::vector<int> &f) {
  int k = 0;
  while ((std::size_t{1} << k) < f.size()) ++k;
  if (f.empty() || (std::size_t{1} << k) != f.size() || k < 1 || k + 1 > kMaxSpins)
    throw Error("invalid_oracle", "function table must have 2^k entries, k >= 1");
  for (int v : f)
    if (v != 0 && v != 1) throw Error("invalid_oracle", "function values must be 0 or 1");
  const int n = k + 1;
  Circuit c(n);
  c.add(Rotation{k, RotationAxis::X, 180.0, 0.0});
  for (int s = 0; s < n; ++s) c.add(Hadamard{s});
  std::vector<std::size_t> table(f.begin(), f.end());
  c.append(oracle_circuit(table, k, 1));
  for (int s = 0; s < k; ++s) c.add(Hadamard{s});
  return c;
}

void write_result(std::ostream &out, const PeriodFindingResult &r) {
  nlohmann::ordered_json j;
  j["register1_bits"] = r.n1;
  nlohmann::ordered_json dist = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < r.probabilities.size(); ++k)
    if (r.probabilities[k] > 1e-12) dist[std::to_string(k)] = r.probabilities[k];
  j["probabilities"] = dist;
  if (!r.histogram.empty()) {
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (const auto &[k, count] : r.histogram) hist[std::to_string(k)] = count;
    j["histogram"] = hist;
  }
  j["period"] = r.period ? nlohmann::ordered_json(*r.period) : nlohmann::ordered_json(nullptr);
  j["success_probability"] = r.success_probability;
  if (r.factors)
    j["factors"] = {r.factors->first, r.factors->second};
  else
    j["factors"] = nullptr;
  out << j.dump(2) << "\n";
}

}  // namespace nmrqc
