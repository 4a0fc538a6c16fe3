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

#include "nmrqc/spin_system.hpp"

#include <cmath>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "nmrqc/error.hpp"

namespace nmrqc {

SpinSystem::SpinSystem(std::vector<Spin> spins, Eigen::MatrixXd j_hz)
    : spins_(std::move(spins)), j_hz_(std::move(j_hz)) {
  const int n = size();
  if (n < 1) throw Error("invalid_system", "spin system needs at least one spin");
  if (n > kMaxSpins)
    throw Error("too_many_spins", "at most " + std::to_string(kMaxSpins) +
                                      " spins are supported");
  if (j_hz_.rows() != n || j_hz_.cols() != n)
    throw Error("invalid_system", "coupling matrix must be n x n");
  for (int i = 0; i < n; ++i) {
    if (j_hz_(i, i) != 0.0)
      throw Error("invalid_coupling", "self-coupling of spin " + std::to_string(i));
    for (int j = i + 1; j < n; ++j)
      if (j_hz_(i, j) != j_hz_(j, i))
        throw Error("asymmetric_coupling",
                    "J[" + std::to_string(i) + "][" + std::to_string(j) +
                        "] differs from J[" + std::to_string(j) + "][" +
                        std::to_string(i) + "]");
  }
  for (const Spin &s : spins_) {
    if (!std::isfinite(s.offset_hz))
      throw Error("invalid_system", "non-finite offset for spin " + s.label);
    if ((s.t1_s && !(*s.t1_s > 0.0)) || (s.t2_s && !(*s.t2_s > 0.0)))
      throw Error("invalid_relaxation",
                  "relaxation times must be positive (spin " + s.label + ")");
    if (s.t1_s && s.t2_s && *s.t2_s > 2.0 * *s.t1_s)
      throw Error("invalid_relaxation", "T2 > 2 T1 for spin " + s.label);
  }
}

std::vector<std::pair<int, int>> SpinSystem::coupling_graph() const {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (j_hz_(i, j) != 0.0) edges.emplace_back(i, j);
  return edges;
}

std::vector<int> SpinSystem::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (j != i && j_hz_(i, j) != 0.0) out.push_back(j);
  return out;
}

std::vector<int> SpinSystem::spins_on_channel(std::string_view channel) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (spins_[static_cast<std::size_t>(i)].channel == channel) out.push_back(i);
  return out;
}

bool SpinSystem::has_relaxation() const {
  for (const Spin &s : spins_)
    if (!s.t1_s || !s.t2_s) return false;
  return true;
}

std::vector<double> SpinSystem::thermal_weights() const {
  std::vector<double> w;
  const double scale = std::ldexp(1.0, -size());
  for (const Spin &s : spins_) w.push_back(s.polarization * scale);
  return w;
}

std::optional<int> SpinSystem::index_of(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (spins_[static_cast<std::size_t>(i)].label == label) return i;
  return std::nullopt;
}

SpinSystem SpinSystem::relabeled(const std::vector<int> &perm) const {
  const int n = size();
  if (static_cast<int>(perm.size()) != n)
    throw Error("invalid_permutation", "relabeling must list every spin");
  std::vector<Spin> spins;
  Eigen::MatrixXd j(n, n);
  for (int a = 0; a < n; ++a) {
    spins.push_back(spin(perm[static_cast<std::size_t>(a)]));
    for (int b = 0; b < n; ++b)
      j(a, b) = j_hz_(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
  }
  return SpinSystem(std::move(spins), std::move(j));
}

namespace {

double require_number(const nlohmann::json &obj, const char *key) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw Error("invalid_config", std::string("missing numeric field '") + key + "'");
  return obj[key].get<double>();
}

// Sets J[i][j] from one side of the matrix, mirroring when the other side is
// still unset and rejecting conflicting values.
void set_coupling(Eigen::MatrixXd &j, Eigen::MatrixXi &seen, int a, int b,
                  double value) {
  const int n = static_cast<int>(j.rows());
  if (a < 0 || b < 0 || a >= n || b >= n)
    throw Error("invalid_config", "coupling index out of range");
  if (a == b) {
    if (value != 0.0)
      throw Error("invalid_coupling", "self-coupling of spin " + std::to_string(a));
    return;
  }
  if (seen(a, b) && j(a, b) != value)
    throw Error("asymmetric_coupling", "conflicting values for J[" +
                                           std::to_string(a) + "][" +
                                           std::to_string(b) + "]");
  j(a, b) = value;
  seen(a, b) = 1;
  if (!seen(b, a)) {
    j(b, a) = value;
  } else if (j(b, a) != value) {
    throw Error("asymmetric_coupling", "J[" + std::to_string(a) + "][" +
                                           std::to_string(b) + "] differs from J[" +
                                           std::to_string(b) + "][" +
                                           std::to_string(a) + "]");
  }
}

}  // namespace

SpinSystem load_system(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error("invalid_config", e.what());
  }
  if (!doc.contains("spins") || !doc["spins"].is_array())
    throw Error("invalid_config", "missing 'spins' list");
  std::vector<Spin> spins;
  for (const auto &entry : doc["spins"]) {
    Spin s;
    s.label = entry.value("label", "S" + std::to_string(spins.size()));
    s.offset_hz = require_number(entry, "offset_hz");
    s.channel = entry.value("channel", s.label);
    if (entry.contains("t1_s")) s.t1_s = require_number(entry, "t1_s");
    if (entry.contains("t2_s")) s.t2_s = require_number(entry, "t2_s");
    if (entry.contains("polarization"))
      s.polarization = require_number(entry, "polarization");
    spins.push_back(std::move(s));
  }
  const int n = static_cast<int>(spins.size());
  if (n < 1) throw Error("invalid_system", "spin system needs at least one spin");
  if (n > kMaxSpins)
    throw Error("too_many_spins", "at most " + std::to_string(kMaxSpins) +
                                      " spins are supported");

  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n, n);
  if (doc.contains("j_hz")) {
    for (const auto &c : doc["j_hz"]) {
      const int a = static_cast<int>(require_number(c, "i"));
      const int b = static_cast<int>(require_number(c, "j"));
      set_coupling(j, seen, a, b, require_number(c, "value"));
    }
  }
  if (doc.contains("j_matrix")) {
    const auto &rows = doc["j_matrix"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw Error("invalid_config", "'j_matrix' must have n rows");
    for (int a = 0; a < n; ++a) {
      if (!rows[a].is_array() || static_cast<int>(rows[a].size()) != n)
        throw Error("invalid_config", "'j_matrix' must have n columns");
      for (int b = 0; b < n; ++b) {
        const double v = rows[a][b].get<double>();
        // Zero entries in the lower triangle mean "mirror the upper one".
        if (v == 0.0 && a > b) continue;
        if (v == 0.0 && a < b && rows[b][a].get<double>() != 0.0) continue;
        set_coupling(j, seen, a, b, v);
      }
    }
  }
  return SpinSystem(std::move(spins), std::move(j));
}

SpinSystem load_system_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error("io_error", "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return load_system(ss.str());
}

Matrix internal_hamiltonian(const SpinSystem &sys, HamiltonianModel model) {
  const int n = sys.size();
  const std::size_t dim = std::size_t{1} << n;
  Matrix h = Matrix::Zero(dim, dim);
  // Weak part is diagonal; fill it directly.
  for (std::size_t k = 0; k < dim; ++k) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double mi = spin_bit(k, i, n) == 0 ? 0.5 : -0.5;
      e += kTwoPi * sys.offset_hz(i) * mi;
      for (int j = i + 1; j < n; ++j) {
        const double mj = spin_bit(k, j, n) == 0 ? 0.5 : -0.5;
        e += kTwoPi * sys.coupling_hz(i, j) * mi * mj;
      }
    }
    h(k, k) = e;
  }
  if (model.mode == CouplingMode::Strong) {
    for (const auto &[i, j] : sys.coupling_graph()) {
      const double w = kTwoPi * sys.coupling_hz(i, j);
      h += w * (spin_operator(SpinAxis::X, i, n) * spin_operator(SpinAxis::X, j, n) +
                spin_operator(SpinAxis::Y, i, n) * spin_operator(SpinAxis::Y, j, n));
    }
  }
  return h;
}

std::vector<MultipletLine> multiplet_lines(const SpinSystem &sys, int spin) {
  const int n = sys.size();
  if (spin < 0 || spin >= n)
    throw Error("index_out_of_range", "spin index " + std::to_string(spin) +
                                          " out of range");
  std::vector<int> others;
  for (int j = 0; j < n; ++j)
    if (j != spin) others.push_back(j);
  const std::size_t count = std::size_t{1} << others.size();
  std::vector<MultipletLine> lines;
  lines.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    MultipletLine line;
    line.frequency_hz = sys.offset_hz(spin);
    for (std::size_t k = 0; k < others.size(); ++k) {
      const int bit = static_cast<int>((m >> (others.size() - 1 - k)) & 1u);
      line.neighbor_bits.push_back(bit);
      line.label.push_back(bit ? '1' : '0');
      // Transition frequency E(spin up) - E(spin down) of the weak
      // Hamiltonian; a neighbour in |0> (Iz = +1/2) shifts it by +J/2.
      const double m_j = bit == 0 ? 0.5 : -0.5;
      line.frequency_hz += sys.coupling_hz(spin, others[k]) * m_j;
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace nmrqc
