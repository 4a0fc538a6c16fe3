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
#include <random>
#include <string>
#include <vector>

#include "nmrqc/quantum_state.hpp"
#include "nmrqc/spin_system.hpp"

namespace nmrqc::fixtures {

// Heteronuclear 1H-13C pair in per-spin rotating frames.
inline SpinSystem chloroform(double j = 215.0, bool with_relaxation = false) {
  std::string relax = with_relaxation ? R"(, "t1_s": 4.0, "t2_s": 2.0)" : "";
  return load_system(R"({"spins": [{"label": "H", "offset_hz": 0, "channel": "1H")" + relax +
                     R"(}, {"label": "C", "offset_hz": 500, "channel": "13C")" + relax +
                     R"(}], "j_hz": [{"i": 0, "j": 1, "value": )" + std::to_string(j) + "}]}");
}

// n spins on one channel; every pair coupled unless `chain` is set.
inline SpinSystem coupled_spins(int n, bool chain = false) {
  std::vector<Spin> spins;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    spins.push_back({"S" + std::to_string(a), 700.0 * a + 37.0 * a * a, "1H", std::nullopt, std::nullopt, 1e-5});
    for (int b = a + 1; b < n; ++b) {
      if (chain && b != a + 1) continue;
      j(a, b) = j(b, a) = 20.0 + 13.0 * a + 7.0 * b;
    }
  }
  return SpinSystem(std::move(spins), j);
}

inline Matrix random_hermitian(int n, std::mt19937_64 &rng, bool traceless) {
  std::normal_distribution<double> g;
  const Eigen::Index d = Eigen::Index{1} << n;
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  Matrix h = 0.5 * (m + m.adjoint());
  if (traceless) h -= (h.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
  return h;
}

inline DensityMatrix random_deviation(int n, std::mt19937_64 &rng) {
  return DensityMatrix(random_hermitian(n, rng, true), Representation::Deviation);
}

inline DensityMatrix random_full(int n, std::mt19937_64 &rng) {
  Matrix a = random_hermitian(n, rng, false);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho, Representation::Full);
}

inline Vector random_state(int n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vector v(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = Complex(g(rng), g(rng));
  return v.normalized();
}

}  // namespace nmrqc::fixtures
