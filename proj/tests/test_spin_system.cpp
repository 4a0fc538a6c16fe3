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

#include <algorithm>

#include "fixtures.hpp"
#include "nmrqc/error.hpp"

using namespace nmrqc;

namespace {

std::string error_code(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(LoadSystem, ChloroformPair) {
  const SpinSystem sys = fixtures::chloroform();
  EXPECT_EQ(sys.size(), 2);
  ASSERT_EQ(sys.coupling_graph().size(), 1u);
  EXPECT_EQ(sys.coupling_graph()[0], std::make_pair(0, 1));
  EXPECT_DOUBLE_EQ(sys.coupling_hz(1, 0), 215.0);
  EXPECT_FALSE(sys.has_relaxation());
  EXPECT_EQ(sys.spins_on_channel("13C"), std::vector<int>{1});
}

TEST(LoadSystem, SingleSpin) {
  const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 12.5}]})");
  EXPECT_EQ(sys.size(), 1);
  EXPECT_TRUE(sys.coupling_graph().empty());
}

TEST(LoadSystem, Errors) {
  EXPECT_EQ(error_code([] {
              load_system(R"({"spins": [{"offset_hz": 0}, {"offset_hz": 1}], "j_matrix": [[0, 10], [11, 0]]})");
            }),
            "asymmetric_coupling");
  EXPECT_EQ(error_code([] { load_system(R"({"spins": []})"); }), "invalid_system");
  EXPECT_EQ(error_code([] { load_system(R"({"spins": [{"offset_hz": 0, "t1_s": -1, "t2_s": 1}]})"); }),
            "invalid_relaxation");
  EXPECT_EQ(error_code([] { load_system("{not json"); }), "invalid_config");
}

TEST(LoadSystem, UpperTriangleMatrixMirrors) {
  const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 0}, {"offset_hz": 1}], "j_matrix": [[0, 7], [0, 0]]})");
  EXPECT_DOUBLE_EQ(sys.coupling_hz(1, 0), 7.0);
}

TEST(Hamiltonian, SingleSpinZeeman) {
  const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 120}]})");
  const Matrix h = internal_hamiltonian(sys);
  EXPECT_NEAR(h(0, 0).real(), kPi * 120.0, 1e-9);
  EXPECT_NEAR(h(1, 1).real(), -kPi * 120.0, 1e-9);
  EXPECT_NEAR(std::abs(h(0, 1)), 0.0, 1e-15);
}

TEST(Hamiltonian, CouplingSplitsTransitionsByJ) {
  const double j = 215.0;
  const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 0}, {"offset_hz": 0}], "j_hz": [{"i": 0, "j": 1, "value": 215}]})");
  const Matrix h = internal_hamiltonian(sys);
  // Spin-0 transitions with spin 1 in |0> and in |1>.
  const double f0 = (h(0, 0) - h(2, 2)).real() / kTwoPi;
  const double f1 = (h(1, 1) - h(3, 3)).real() / kTwoPi;
  EXPECT_NEAR(std::abs(f0 - f1), j, 1e-9);
}

TEST(Hamiltonian, StrongAgreesWithWeakToFirstOrder) {
  const SpinSystem sys = load_system(
      R"({"spins": [{"offset_hz": 0}, {"offset_hz": 10000}], "j_hz": [{"i": 0, "j": 1, "value": 10}]})");
  Eigen::SelfAdjointEigenSolver<Matrix> weak(internal_hamiltonian(sys));
  Eigen::SelfAdjointEigenSolver<Matrix> strong(internal_hamiltonian(sys, {CouplingMode::Strong}));
  const double diff = (weak.eigenvalues() - strong.eigenvalues()).cwiseAbs().maxCoeff() / kTwoPi;
  // Second order: J^2 / dnu = 1e-2 Hz.
  EXPECT_LT(diff, 0.02);
  EXPECT_LT(hermiticity_error(internal_hamiltonian(sys, {CouplingMode::Strong})), 1e-12);
}

TEST(Multiplet, TwoSpinLabels) {
  const SpinSystem sys = fixtures::chloroform();
  const auto lines = multiplet_lines(sys, 0);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].label, "0");
  EXPECT_EQ(lines[1].label, "1");
  EXPECT_NEAR(std::abs(lines[0].frequency_hz - lines[1].frequency_hz), 215.0, 1e-12);
  EXPECT_NEAR(lines[0].frequency_hz + lines[1].frequency_hz, 0.0, 1e-12);
}

TEST(Multiplet, SingleSpin) {
  const SpinSystem sys = load_system(R"({"spins": [{"offset_hz": 42}]})");
  const auto lines = multiplet_lines(sys, 0);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_DOUBLE_EQ(lines[0].frequency_hz, 42.0);
  EXPECT_EQ(lines[0].label, "");
}

TEST(Multiplet, MatchesEigenvalueDifferences) {
  const SpinSystem sys = fixtures::coupled_spins(3);
  const Matrix h = internal_hamiltonian(sys);
  for (int s = 0; s < 3; ++s) {
    const auto lines = multiplet_lines(sys, s);
    ASSERT_EQ(lines.size(), 4u);
    for (const auto &line : lines) {
      std::size_t up = 0;
      int k = 0;
      for (int o = 0; o < 3; ++o)
        if (o != s) up |= static_cast<std::size_t>(line.neighbor_bits[k++]) << bit_position(o, 3);
      const std::size_t down = up | (std::size_t{1} << bit_position(s, 3));
      const double f = (h(up, up) - h(down, down)).real() / kTwoPi;
      EXPECT_NEAR(line.frequency_hz, f, 1e-9);
    }
  }
}

TEST(Multiplet, RelabelingEquivariance) {
  const SpinSystem sys = fixtures::coupled_spins(3);
  const std::vector<int> perm{2, 0, 1};
  const SpinSystem rel = sys.relabeled(perm);
  for (int k = 0; k < 3; ++k) {
    auto a = multiplet_lines(rel, k);
    auto b = multiplet_lines(sys, perm[k]);
    std::vector<double> fa, fb;
    for (auto &l : a) fa.push_back(l.frequency_hz);
    for (auto &l : b) fb.push_back(l.frequency_hz);
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    for (std::size_t i = 0; i < fa.size(); ++i) EXPECT_NEAR(fa[i], fb[i], 1e-9);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> e1(internal_hamiltonian(sys)), e2(internal_hamiltonian(rel));
  EXPECT_LT((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Multiplet, OutOfRange) {
  EXPECT_THROW(multiplet_lines(fixtures::chloroform(), 2), Error);
}
