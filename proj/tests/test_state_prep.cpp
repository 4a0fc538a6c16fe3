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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "nmrqc/error.hpp"
#include "nmrqc/evolution.hpp"
#include "nmrqc/state_prep.hpp"

using namespace nmrqc;

namespace {

std::vector<double> diag(const DensityMatrix &rho) {
  std::vector<double> d;
  for (Eigen::Index k = 0; k < rho.dim(); ++k) d.push_back(rho.matrix()(k, k).real());
  return d;
}

}  // namespace

TEST(Temporal, PaperTripleOverAbstractLabels) {
  // {a,b,-b,-a} + {a,-b,-a,b} + {a,-a,b,-b} = {3a,-a,-a,-a}, read verbatim.
  const double a = 3.0, b = 5.0;
  const double rows[3][4] = {{a, b, -b, -a}, {a, -b, -a, b}, {a, -a, b, -b}};
  const double want[4] = {3 * a, -a, -a, -a};
  for (int k = 0; k < 4; ++k) EXPECT_EQ(rows[0][k] + rows[1][k] + rows[2][k], want[k]);
}

TEST(Temporal, TwoSpinsEqualWeights) {
  const SpinSystem sys = fixtures::coupled_spins(2);
  const auto t = temporal_average(sys, 0);
  EXPECT_EQ(t.circuits.size(), 3u);
  const double w = sys.thermal_weights()[0];
  const auto d = diag(t.combined);
  EXPECT_NEAR(d[0], 6 * w, 1e-20);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(d[k], -2 * w, 1e-20);
  EXPECT_EQ(t.residual, 0.0);
  for (const Circuit &c : t.circuits) EXPECT_TRUE(is_permutation_matrix(circuit_unitary(c)));
}

TEST(Temporal, ExactRationalSums) {
  // Integer weights make the check exact in floating point.
  for (int n = 1; n <= 4; ++n) {
    const SpinSystem sys = fixtures::coupled_spins(n);
    const std::size_t d = std::size_t{1} << n;
    for (std::size_t s = 0; s < d; ++s) {
      const auto t = temporal_average(sys, s, std::vector<double>(static_cast<std::size_t>(n), 1.0));
      EXPECT_GE(t.circuits.size(), t.lower_bound);
      const Matrix want = effective_pure_target(n, s).matrix() * t.scale;
      EXPECT_EQ((t.combined.matrix() - want).cwiseAbs().maxCoeff(), 0.0) << "n=" << n << " s=" << s;
    }
  }
}

TEST(Temporal, SingleSpinAndThreeSpinCount) {
  EXPECT_EQ(temporal_average(fixtures::coupled_spins(1), 0).circuits.size(), 1u);
  const auto t3 = temporal_average(fixtures::coupled_spins(3), 0);
  EXPECT_EQ(t3.circuits.size(), 3u);
  EXPECT_EQ(t3.lower_bound, 3u);
}

TEST(Temporal, UnequalWeights) {
  // The three-experiment n=3 construction is only exact for equal weights.
  const auto t3 = temporal_average(fixtures::coupled_spins(3), 0, {1.0, 0.5, 0.25});
  EXPECT_GT(t3.residual, 0.0);
  const Matrix fit = t3.scale * effective_pure_target(3, 0).matrix();
  EXPECT_NEAR((t3.combined.matrix() - fit).norm(), t3.residual, 1e-12);
  // Orbits through every non-target state are exact for any weights.
  const auto t2 = temporal_average(fixtures::chloroform(), 0, {1.0, 0.25});
  EXPECT_EQ(t2.residual, 0.0);
}

TEST(Spatial, ReachesTarget) {
  const SpinSystem sys = fixtures::chloroform();
  const auto s = spatial_average(sys);
  const Matrix want = effective_pure_target(2, 0).matrix() * s.scale;
  EXPECT_LT((s.output.matrix() - want).norm() / want.norm(), 1e-8);
  const auto poe = to_product_operators(s.output);
  EXPECT_NEAR(poe.coefficient("Iz Iz") / poe.coefficient("Iz E"), 1.0, 1e-8);
  EXPECT_NEAR(poe.coefficient("E Iz") / poe.coefficient("Iz E"), 1.0, 1e-8);
  EXPECT_THROW(spatial_average(fixtures::coupled_spins(3)), Error);
}

TEST(Spatial, InputSpecific) {
  const SpinSystem sys = fixtures::chloroform();
  const auto s = spatial_average(sys);
  SimOptions ideal;
  ideal.pulse_model = PulseModel::Ideal;
  const DensityMatrix pure = effective_pure_target(2, 0);
  const DensityMatrix out = simulate(s.sequence, pure, sys, ideal).logical_state();
  EXPECT_GT(distance(out, pure).trace_distance, 1e-3);
}

TEST(Spatial, CrusherIsProjection) {
  std::mt19937_64 rng(8);
  const DensityMatrix rho = fixtures::random_deviation(2, rng);
  const DensityMatrix crushed = coherence_order_filter(rho, {0});
  EXPECT_LT(crushed.matrix().norm(), rho.matrix().norm());
  EXPECT_NEAR(coherence_order_filter(crushed, {0}).matrix().norm(), crushed.matrix().norm(), 1e-15);
}

TEST(Logical, PrintedPopulationLists) {
  const SpinSystem sys = fixtures::coupled_spins(3);
  const auto l = logical_label(sys);
  const double a = sys.thermal_weights()[0];
  const double thermal[] = {3, 1, 1, -1, 1, -1, -1, -3};
  const double relabeled[] = {3, -1, -1, -1, 1, 1, 1, -3};
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(l.thermal.matrix()(k, k).real(), thermal[k] * a, 1e-20);
    EXPECT_NEAR(l.relabeled.matrix()(k, k).real(), relabeled[k] * a, 1e-20);
  }
  EXPECT_TRUE(is_permutation_matrix(circuit_unitary(l.circuit)));
  EXPECT_EQ(l.condition_spin, 0);
  EXPECT_EQ(l.condition_value, 0);
  const Matrix cond = l.conditional.matrix();
  const Matrix want = effective_pure_target(2, 0).matrix();
  EXPECT_LT((cond / cond(0, 0).real() - want / want(0, 0).real()).norm(), 1e-12);
}

TEST(Logical, UnequalWeights) {
  std::vector<Spin> spins{{"A", 0, "1H", {}, {}, 1e-5}, {"B", 100, "1H", {}, {}, 2e-5}, {"C", 200, "1H", {}, {}, 1e-5}};
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
  const SpinSystem sys(spins, j);
  try {
    logical_label(sys);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "unequal_weights");
  }
}

TEST(Cost, Examples) {
  EXPECT_EQ(prep_cost(PrepScheme::Temporal, 2).experiments, 3u);
  EXPECT_EQ(prep_cost(PrepScheme::Temporal, 5).experiment_bound, 7u);
  EXPECT_DOUBLE_EQ(prep_cost(PrepScheme::Logical, 3).signal_scale, 3.0 / 8.0);
  EXPECT_EQ(sv_spins_needed(1.0, 1e-5), 10000000000ull);
  EXPECT_EQ(parse_scheme("spatial"), PrepScheme::Spatial);
  EXPECT_THROW(parse_scheme("magic"), Error);
}
