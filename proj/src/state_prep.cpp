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

#include "nmrqc/state_prep.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <optional>

#include "nmrqc/error.hpp"
#include "nmrqc/evolution.hpp"
#include "nmrqc/pulse_compiler.hpp"

namespace nmrqc {

namespace {

// Primitive polynomials over GF(2), bit k = coefficient of x^k.
constexpr std::array<unsigned, 13> kPrimitive = {0,     0x3,   0x7,   0xB,   0x13,  0x25,  0x43,
                                                 0x83,  0x11D, 0x211, 0x409, 0x805, 0x1053};

std::size_t apply_columns(const std::vector<std::size_t> &cols, std::size_t x) {
  std::size_t y = 0;
  for (std::size_t j = 0; j < cols.size(); ++j)
    if ((x >> j) & 1u) y ^= cols[j];
  return y;
}

// Multiplication by α^k in GF(2^n) as a map on the basis index.
std::vector<std::vector<std::size_t>> cyclic_field_maps(int n) {
  const std::size_t size = std::size_t{1} << n;
  const unsigned poly = kPrimitive[static_cast<std::size_t>(n)];
  auto times_alpha = [&](std::size_t v) {
    v <<= 1;
    if (v & size) v ^= poly;
    return v;
  };
  std::vector<std::size_t> cols(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) cols[static_cast<std::size_t>(j)] = std::size_t{1} << j;
  std::vector<std::vector<std::size_t>> maps;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    std::vector<std::size_t> m(size);
    for (std::size_t x = 0; x < size; ++x) m[x] = apply_columns(cols, x);
    maps.push_back(std::move(m));
    for (auto &c : cols) c = times_alpha(c);
  }
  return maps;
}

bool independent(const std::vector<std::size_t> &rows) {
  std::vector<std::size_t> basis;
  for (std::size_t r : rows) {
    for (std::size_t b : basis) r = std::min(r, r ^ b);
    if (r == 0) return false;
    basis.push_back(r);
    std::sort(basis.rbegin(), basis.rend());
  }
  return true;
}

// Three-spin construction: three bases of GF(2)^3 whose rows cover every
// nonzero vector with a common signed multiplicity. Experiment k maps
// x to R_k^{-1}(x ⊕ c_k), where c_k carries the row signs.
std::vector<std::vector<std::size_t>> three_spin_maps() {
  constexpr std::size_t size = 8;
  std::vector<std::vector<std::size_t>> bases;
  for (std::size_t a = 1; a < size; ++a)
    for (std::size_t b = a + 1; b < size; ++b)
      for (std::size_t c = b + 1; c < size; ++c)
        if (independent({a, b, c})) bases.push_back({a, b, c});
  std::optional<std::array<std::size_t, 3>> best;
  int best_c = 0;
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i; j < bases.size(); ++j)
      for (std::size_t k = j; k < bases.size(); ++k) {
        std::array<int, size> count{};
        for (std::size_t idx : {i, j, k})
          for (std::size_t u : bases[idx]) ++count[u];
        int c_max = *std::min_element(count.begin() + 1, count.end());
        for (int c = c_max; c >= 1; --c) {
          const bool ok = std::all_of(count.begin() + 1, count.end(),
                                      [c](int v) { return v >= c && (v - c) % 2 == 0; });
          if (ok && c > best_c) {
            best_c = c;
            best = std::array<std::size_t, 3>{i, j, k};
          }
          if (ok) break;
        }
      }
  if (!best) throw Error("internal", "no three-experiment cover found");
  std::array<int, size> count{};
  for (std::size_t idx : *best)
    for (std::size_t u : bases[idx]) ++count[u];
  std::array<int, size> plus_left{};
  for (std::size_t u = 1; u < size; ++u) plus_left[u] = (count[u] + best_c) / 2;
  std::vector<std::vector<std::size_t>> maps;
  for (std::size_t idx : *best) {
    const auto &rows = bases[idx];
    std::size_t signs = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (plus_left[rows[i]] > 0)
        --plus_left[rows[i]];
      else
        signs |= std::size_t{1} << i;
    }
    // y -> R y ⊕ c is the preimage map; invert it.
    std::vector<std::size_t> map(size);
    for (std::size_t y = 0; y < size; ++y) {
      std::size_t x = signs;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::popcount(rows[i] & y) % 2) x ^= std::size_t{1} << i;
      map[x] = y;
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

Circuit permutation_circuit(const std::vector<std::size_t> &map, int n) {
  Permutation p;
  for (int s = 0; s < n; ++s) p.spins.push_back(s);
  p.map = map;
  Circuit c(n);
  if (const auto gates = synthesize_affine(p)) {
    for (const Gate &g : *gates) c.add(g);
  } else {
    c.add(std::move(p));
  }
  return c;
}

// Diagonal of a deviation matrix with populations moved x -> map[x].
DensityMatrix permute_diagonal(const DensityMatrix &rho, const std::vector<std::size_t> &map) {
  Matrix m = Matrix::Zero(rho.dim(), rho.dim());
  for (std::size_t x = 0; x < map.size(); ++x) {
    const auto from = static_cast<Eigen::Index>(x);
    const auto to = static_cast<Eigen::Index>(map[x]);
    m(to, to) = rho.matrix()(from, from);
  }
  return DensityMatrix(std::move(m), rho.representation());
}

std::pair<double, double> fit_scale(const DensityMatrix &state, const DensityMatrix &target) {
  const Matrix &a = state.matrix();
  const Matrix &t = target.matrix();
  const double scale = (t.adjoint() * a).trace().real() / t.squaredNorm();
  return {scale, (a - scale * t).norm()};
}

}  // namespace

std::vector<std::vector<std::size_t>> temporal_maps(int n, std::size_t target) {
  if (n < 1 || n > kMaxSpins) throw Error("too_many_spins", "spin count out of range");
  const std::size_t size = std::size_t{1} << n;
  if (target >= size) throw Error("index_out_of_range", "target basis state out of range");
  auto maps = n == 3 ? three_spin_maps() : cyclic_field_maps(n);
  for (auto &m : maps)
    for (auto &y : m) y ^= target;
  return maps;
}

TemporalAverage temporal_average(const SpinSystem &sys, std::size_t target, std::vector<double> weights) {
  const int n = sys.size();
  if (weights.empty()) weights = sys.thermal_weights();
  const DensityMatrix thermal = thermal_deviation(sys, weights);
  auto maps = temporal_maps(n, target);
  DensityMatrix combined = DensityMatrix::zero_deviation(n);
  std::vector<Circuit> circuits;
  for (const auto &m : maps) {
    combined = combined + permute_diagonal(thermal, m);
    circuits.push_back(permutation_circuit(m, n));
  }
  const auto [scale, residual] = fit_scale(combined, effective_pure_target(n, target));
  const std::size_t bound = ((std::size_t{1} << n) - 1 + static_cast<std::size_t>(n) - 1) /
                            static_cast<std::size_t>(n);
  return TemporalAverage{std::move(circuits), std::move(maps), std::move(combined), scale, residual, bound};
}

SpatialAverage spatial_average(const SpinSystem &sys, std::vector<double> weights) {
  if (sys.size() != 2) throw Error("wrong_spin_count", "spatial averaging is defined for two spins");
  const double j = sys.coupling_hz(0, 1);
  if (j == 0.0) throw Error("missing_coupling", "spatial averaging needs J != 0");
  if (weights.empty()) weights = sys.thermal_weights();
  const double ratio = weights[0] / (2.0 * weights[1]);
  if (!(std::abs(ratio) <= 1.0))
    throw Error("unreachable_target", "spin 1 polarization too small to balance spin 0");
  const double theta = rad_to_deg(std::acos(ratio));
  PulseSequence seq(2);
  seq.add(HardPulse{{1}, theta, 0.0});
  seq.add(Crusher{});
  seq.add(HardPulse{{0}, 45.0, 0.0});
  seq.add(Delay{1.0 / (2.0 * std::abs(j))});
  seq.add(HardPulse{{0}, 45.0, j > 0.0 ? -90.0 : 90.0});
  seq.add(Crusher{});
  seq.set_frames_deg(track_frames(seq, sys));
  const DensityMatrix input = thermal_deviation(sys, weights);
  SimOptions options;
  options.pulse_model = PulseModel::Ideal;
  const DensityMatrix output = simulate(seq, input, sys, options).logical_state();
  const auto [scale, residual] = fit_scale(output, effective_pure_target(2, 0));
  return SpatialAverage{std::move(seq), input, output, scale, residual};
}

LogicalLabel logical_label(const SpinSystem &sys) {
  if (sys.size() != 3) throw Error("wrong_spin_count", "logical labeling is defined for three spins");
  const std::vector<double> w = sys.thermal_weights();
  for (double v : w)
    if (std::abs(v - w[0]) > 1e-12 * std::abs(w[0]))
      throw Error("unequal_weights", "logical labeling requires equal thermal weights");
  constexpr std::size_t size = 8;
  const std::array<int, size> before = {3, 1, 1, -1, 1, -1, -1, -3};
  const std::array<int, size> after = {3, -1, -1, -1, 1, 1, 1, -3};
  std::optional<std::vector<std::size_t>> found;
  for (std::size_t c0 = 1; c0 < size && !found; ++c0)
    for (std::size_t c1 = 1; c1 < size && !found; ++c1)
      for (std::size_t c2 = 1; c2 < size && !found; ++c2) {
        const std::vector<std::size_t> cols = {c0, c1, c2};
        if (!independent(cols)) continue;
        std::vector<std::size_t> map(size);
        bool ok = true;
        for (std::size_t x = 0; x < size && ok; ++x) {
          map[x] = apply_columns(cols, x);
          ok = after[map[x]] == before[x];
        }
        if (ok) found = map;
      }
  if (!found) throw Error("internal", "no linear relabeling found");
  const DensityMatrix thermal = thermal_deviation(sys, w);
  const DensityMatrix relabeled = permute_diagonal(thermal, *found);
  Matrix block = relabeled.matrix().topLeftCorner(4, 4);
  block -= (block.trace() / 4.0) * Matrix::Identity(4, 4);
  return LogicalLabel{permutation_circuit(*found, 3), *found, thermal, relabeled, 0, 0, {1, 2},
                      DensityMatrix(std::move(block), Representation::Deviation)};
}

PrepScheme parse_scheme(std::string_view name) {
  if (name == "temporal") return PrepScheme::Temporal;
  if (name == "spatial") return PrepScheme::Spatial;
  if (name == "logical") return PrepScheme::Logical;
  throw Error("invalid_scheme", "scheme must be temporal, spatial or logical");
}

std::string_view to_string(PrepScheme scheme) {
  switch (scheme) {
    case PrepScheme::Temporal: return "temporal";
    case PrepScheme::Spatial: return "spatial";
    case PrepScheme::Logical: return "logical";
  }
  return "unknown";
}

PrepCost prep_cost(PrepScheme scheme, int n) {
  if (n < 1 || n > kMaxSpins) throw Error("too_many_spins", "spin count out of range");
  const std::size_t states = std::size_t{1} << n;
  PrepCost cost;
  cost.signal_scale = static_cast<double>(n) / static_cast<double>(states);
  if (scheme == PrepScheme::Temporal) {
    cost.experiments = n == 3 ? 3 : states - 1;
    cost.experiment_bound = (states - 1 + static_cast<std::size_t>(n) - 1) / static_cast<std::size_t>(n);
  } else {
    cost.experiments = 1;
    cost.experiment_bound = 1;
  }
  return cost;
}

std::uint64_t sv_spins_needed(double k, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("invalid_argument", "alpha must lie in (0, 1]");
  if (!(k > 0.0)) throw Error("invalid_argument", "k must be positive");
  const double v = k / (alpha * alpha);
  const double nearest = std::round(v);
  if (std::abs(v - nearest) <= 1e-9 * v) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace nmrqc
