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

#include "nmrqc/gates.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "nmrqc/error.hpp"

namespace nmrqc {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_spin(int spin, int n) {
  if (spin < 0 || spin >= n)
    throw Error("index_out_of_range", "spin index " + std::to_string(spin) +
                                          " out of range for " + std::to_string(n) +
                                          " qubits");
}

void check_distinct(const std::vector<int> &spins) {
  std::vector<int> sorted = spins;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error("invalid_gate", "gate spins must be distinct");
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

}  // namespace

char to_char(FourierSign sign) { return sign == FourierSign::Plus ? '+' : '-'; }

double Rotation::phase_deg() const {
  switch (axis) {
    case RotationAxis::X:
      return 0.0;
    case RotationAxis::Y:
      return 90.0;
    case RotationAxis::Azimuth:
      return azimuth_deg;
    case RotationAxis::Z:
      break;
  }
  return 0.0;
}

std::vector<int> gate_spins(const Gate &g) {
  return std::visit(
      Overloaded{
          [](const Rotation &r) { return std::vector<int>{r.spin}; },
          [](const Hadamard &h) { return std::vector<int>{h.spin}; },
          [](const Cnot &c) { return std::vector<int>{c.control, c.target}; },
          [](const Inept &c) { return std::vector<int>{c.control, c.target}; },
          [](const ControlledPhase &c) { return std::vector<int>{c.a, c.b}; },
          [](const Permutation &p) { return p.spins; },
          [](const QftBlock &q) { return q.spins; },
      },
      g);
}

void validate_gate(const Gate &g, int n) {
  const std::vector<int> spins = gate_spins(g);
  if (spins.empty()) throw Error("invalid_gate", "gate acts on no spins");
  for (int s : spins) check_spin(s, n);
  check_distinct(spins);
  if (const auto *p = std::get_if<Permutation>(&g)) {
    const std::size_t ldim = std::size_t{1} << p->spins.size();
    if (p->map.size() != ldim)
      throw Error("invalid_gate", "permutation map must list 2^k images");
    std::vector<bool> hit(ldim, false);
    for (std::size_t v : p->map) {
      if (v >= ldim || hit[v])
        throw Error("invalid_gate", "permutation map is not a bijection");
      hit[v] = true;
    }
  }
}

Matrix local_matrix(const Gate &g) {
  const Complex i(0.0, 1.0);
  return std::visit(
      Overloaded{
          [&](const Rotation &r) -> Matrix {
            if (r.axis == RotationAxis::Z) {
              const double half = deg_to_rad(r.angle_deg) / 2.0;
              Matrix m = Matrix::Zero(2, 2);
              m(0, 0) = std::exp(-i * half);
              m(1, 1) = std::exp(i * half);
              return m;
            }
            const int one[1] = {0};
            return pulse_rotation(one, r.angle_deg, r.phase_deg(), 1);
          },
          [&](const Hadamard &) -> Matrix {
            Matrix m(2, 2);
            m << 1.0, 1.0, 1.0, -1.0;
            return m / std::sqrt(2.0);
          },
          [&](const Cnot &) -> Matrix {
            Matrix m = Matrix::Zero(4, 4);
            m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
            return m;
          },
          [&](const Inept &) -> Matrix {
            Matrix m = Matrix::Zero(4, 4);
            m(0, 0) = 1.0;
            m(1, 1) = i;
            m(2, 3) = 1.0;
            m(3, 2) = -i;
            return m;
          },
          [&](const ControlledPhase &c) -> Matrix {
            Matrix m = Matrix::Identity(4, 4);
            m(3, 3) = std::exp(i * deg_to_rad(c.angle_deg));
            return m;
          },
          [&](const Permutation &p) -> Matrix {
            const std::size_t ldim = p.map.size();
            Matrix m = Matrix::Zero(ldim, ldim);
            for (std::size_t j = 0; j < ldim; ++j) m(p.map[j], j) = 1.0;
            return m;
          },
          [&](const QftBlock &q) -> Matrix {
            return qft_matrix(std::size_t{1} << q.spins.size(), q.sign);
          },
      },
      g);
}

void apply_gate(const Gate &g, Vector &state, int n) {
  const std::vector<int> spins = gate_spins(g);
  if (const auto *p = std::get_if<Permutation>(&g)) {
    apply_local_permutation(state, p->map, spins, n);
    return;
  }
  apply_local(state, local_matrix(g), spins, n);
}

Matrix gate_matrix(const Gate &g, int n) {
  validate_gate(g, n);
  const std::size_t dim = std::size_t{1} << n;
  Matrix out(dim, dim);
  Vector column(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    column.setZero();
    column(k) = 1.0;
    apply_gate(g, column, n);
    out.col(k) = column;
  }
  return out;
}

Circuit::Circuit(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxSpins)
    throw Error("too_many_spins", "qubit count out of range");
}

Circuit &Circuit::add(Gate g) {
  validate_gate(g, qubits_);
  gates_.push_back(std::move(g));
  return *this;
}

Circuit &Circuit::append(const Circuit &other) {
  if (other.qubits() != qubits_)
    throw Error("dimension_mismatch", "circuits differ in qubit count");
  for (const Gate &g : other.gates()) gates_.push_back(g);
  return *this;
}

Matrix circuit_unitary(const Circuit &c) {
  const std::size_t dim = std::size_t{1} << c.qubits();
  Matrix out(dim, dim);
  Vector column(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    column.setZero();
    column(k) = 1.0;
    for (const Gate &g : c.gates()) apply_gate(g, column, c.qubits());
    out.col(k) = column;
  }
  return out;
}

Vector apply_circuit(const Circuit &c, const Vector &state) {
  if (state.size() != (Eigen::Index{1} << c.qubits()))
    throw Error("dimension_mismatch", "state and circuit differ in qubit count");
  Vector out = state;
  for (const Gate &g : c.gates()) apply_gate(g, out, c.qubits());
  return out;
}

DensityMatrix apply_circuit(const Circuit &c, const DensityMatrix &rho) {
  if (rho.spins() != c.qubits())
    throw Error("dimension_mismatch", "state and circuit differ in qubit count");
  // U X U† = U (U X†)†, applied gate by gate to columns.
  Matrix m = rho.matrix();
  const int n = c.qubits();
  for (const Gate &g : c.gates()) {
    for (int pass = 0; pass < 2; ++pass) {
      Matrix t = m.adjoint();
      for (Eigen::Index col = 0; col < t.cols(); ++col) {
        Vector v = t.col(col);
        apply_gate(g, v, n);
        t.col(col) = v;
      }
      m = std::move(t);
    }
  }
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), rho.representation());
}

void append_swap(Circuit &c, int a, int b) {
  c.add(Cnot{a, b});
  c.add(Cnot{b, a});
  c.add(Cnot{a, b});
}

Circuit qft_circuit(const std::vector<int> &spins, FourierSign sign, int n) {
  Circuit c(n);
  const int k = static_cast<int>(spins.size());
  if (k == 0) throw Error("invalid_gate", "QFT needs at least one spin");
  const double s = sign == FourierSign::Plus ? 1.0 : -1.0;
  for (int j = 0; j < k; ++j) {
    c.add(Hadamard{spins[static_cast<std::size_t>(j)]});
    for (int l = j + 1; l < k; ++l)
      c.add(ControlledPhase{spins[static_cast<std::size_t>(l)],
                            spins[static_cast<std::size_t>(j)],
                            s * 360.0 / std::ldexp(1.0, l - j + 1)});
  }
  if (k > 1) {
    Permutation reversal{spins, {}};
    const std::size_t ldim = std::size_t{1} << k;
    for (std::size_t x = 0; x < ldim; ++x) {
      std::size_t r = 0;
      for (int b = 0; b < k; ++b) r |= ((x >> b) & 1u) << (k - 1 - b);
      reversal.map.push_back(r);
    }
    c.add(std::move(reversal));
  }
  return c;
}

Matrix qft_matrix(std::size_t size, FourierSign sign) {
  if (!is_power_of_two(size))
    throw Error("invalid_size", "QFT size must be a power of two");
  const double s = sign == FourierSign::Plus ? 1.0 : -1.0;
  const double norm = 1.0 / std::sqrt(static_cast<double>(size));
  Matrix m(size, size);
  for (std::size_t k = 0; k < size; ++k)
    for (std::size_t j = 0; j < size; ++j) {
      // Reduce jk mod N first so the phase stays exact for large products.
      const double frac = static_cast<double>((j * k) % size) / static_cast<double>(size);
      m(k, j) = norm * std::exp(Complex(0.0, s * kTwoPi * frac));
    }
  return m;
}

std::vector<Complex> fft_reference(std::span<const Complex> x, FourierSign sign) {
  const std::size_t n = x.size();
  std::vector<Complex> y(n, Complex(0.0));
  if (n == 0) return y;
  const double s = sign == FourierSign::Plus ? 1.0 : -1.0;
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc(0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double frac = static_cast<double>((j * k) % n) / static_cast<double>(n);
      acc += x[j] * std::exp(Complex(0.0, s * kTwoPi * frac));
    }
    y[k] = norm * acc;
  }
  return y;
}

std::optional<std::vector<Gate>> synthesize_affine(const Permutation &p) {
  const int k = static_cast<int>(p.spins.size());
  const std::size_t ldim = std::size_t{1} << k;
  if (p.map.size() != ldim) return std::nullopt;
  // Vectors in spin order: bit j <-> spins[j] <-> local bit (k-1-j).
  auto to_vec = [k](std::size_t local) {
    std::size_t v = 0;
    for (int j = 0; j < k; ++j) v |= ((local >> (k - 1 - j)) & 1u) << j;
    return v;
  };
  const std::size_t offset = to_vec(p.map[0]);
  std::vector<std::size_t> cols(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j)
    cols[static_cast<std::size_t>(j)] =
        to_vec(p.map[std::size_t{1} << (k - 1 - j)]) ^ offset;
  for (std::size_t x = 0; x < ldim; ++x) {
    const std::size_t xv = to_vec(x);
    std::size_t y = offset;
    for (int j = 0; j < k; ++j)
      if ((xv >> j) & 1u) y ^= cols[static_cast<std::size_t>(j)];
    if (y != to_vec(p.map[x])) return std::nullopt;
  }
  // rows[r] bit c = A[r][c].
  std::vector<std::size_t> rows(static_cast<std::size_t>(k), 0);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r < k; ++r)
      if ((cols[static_cast<std::size_t>(c)] >> r) & 1u)
        rows[static_cast<std::size_t>(r)] |= std::size_t{1} << c;
  // Reduce A to I with row additions; each addition "row t ^= row c" is
  // CNOT(spins[c] -> spins[t]). A is the product of the recorded operations
  // in order, so the circuit applies them in reverse.
  std::vector<std::pair<int, int>> ops;  // (control, target)
  auto add_row = [&](int target, int control) {
    rows[static_cast<std::size_t>(target)] ^= rows[static_cast<std::size_t>(control)];
    ops.emplace_back(control, target);
  };
  for (int col = 0; col < k; ++col) {
    if (!((rows[static_cast<std::size_t>(col)] >> col) & 1u)) {
      int pivot = -1;
      for (int r = col + 1; r < k && pivot < 0; ++r)
        if ((rows[static_cast<std::size_t>(r)] >> col) & 1u) pivot = r;
      if (pivot < 0) return std::nullopt;
      add_row(col, pivot);
    }
    for (int r = 0; r < k; ++r)
      if (r != col && ((rows[static_cast<std::size_t>(r)] >> col) & 1u)) add_row(r, col);
  }
  std::vector<Gate> gates;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    gates.emplace_back(Cnot{p.spins[static_cast<std::size_t>(it->first)],
                            p.spins[static_cast<std::size_t>(it->second)]});
  for (int j = 0; j < k; ++j)
    if ((offset >> j) & 1u)
      gates.emplace_back(Rotation{p.spins[static_cast<std::size_t>(j)], RotationAxis::X, 180.0, 0.0});
  return gates;
}

bool is_permutation_matrix(const Matrix &u, double tol) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    int ones = 0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
      const Complex v = u(r, c);
      if (std::abs(v - 1.0) <= tol)
        ++ones;
      else if (std::abs(v) > tol)
        return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

void write_circuit(std::ostream &out, const Circuit &c) {
  const auto old_precision = out.precision(17);
  out << "QUBITS " << c.qubits() << "\n";
  for (const Gate &g : c.gates()) {
    std::visit(
        Overloaded{
            [&](const Rotation &r) {
              out << "ROT " << r.spin << ' ';
              switch (r.axis) {
                case RotationAxis::X: out << 'x'; break;
                case RotationAxis::Y: out << 'y'; break;
                case RotationAxis::Z: out << 'z'; break;
                case RotationAxis::Azimuth: out << '@' << r.azimuth_deg; break;
              }
              out << ' ' << r.angle_deg << "\n";
            },
            [&](const Hadamard &h) { out << "H " << h.spin << "\n"; },
            [&](const Cnot &x) { out << "CNOT " << x.control << ' ' << x.target << "\n"; },
            [&](const Inept &x) { out << "INEPT " << x.control << ' ' << x.target << "\n"; },
            [&](const ControlledPhase &x) {
              out << "CPHASE " << x.a << ' ' << x.b << ' ' << x.angle_deg << "\n";
            },
            [&](const Permutation &p) {
              out << "PERM";
              for (int s : p.spins) out << ' ' << s;
              out << " :";
              for (std::size_t v : p.map) out << ' ' << v;
              out << "\n";
            },
            [&](const QftBlock &q) {
              out << "QFT";
              for (int s : q.spins) out << ' ' << s;
              out << ' ' << to_char(q.sign) << "\n";
            },
        },
        g);
  }
  out.precision(old_precision);
}

namespace {

int parse_int(const std::string &tok, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw Error("invalid_format", "line " + std::to_string(line_no) +
                                      ": expected integer, got '" + tok + "'");
  }
}

double parse_double(const std::string &tok, int line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw Error("invalid_format", "line " + std::to_string(line_no) +
                                      ": expected number, got '" + tok + "'");
  }
}

}  // namespace

Circuit read_circuit(std::istream &in) {
  std::vector<std::vector<std::string>> lines;
  std::vector<int> line_numbers;
  std::optional<int> declared;
  int max_spin = -1;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "QUBITS") {
      if (toks.size() != 2) throw Error("invalid_format", "QUBITS takes one value");
      declared = parse_int(toks[1], line_no);
      continue;
    }
    lines.push_back(toks);
    line_numbers.push_back(line_no);
  }

  std::vector<Gate> gates;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto &t = lines[li];
    const int ln = line_numbers[li];
    auto need = [&](std::size_t count) {
      if (t.size() != count)
        throw Error("invalid_format", "line " + std::to_string(ln) + ": '" + t[0] +
                                          "' expects " + std::to_string(count - 1) +
                                          " arguments");
    };
    const std::string &op = t[0];
    if (op == "ROT") {
      need(4);
      Rotation r;
      r.spin = parse_int(t[1], ln);
      const std::string &axis = t[2];
      if (axis == "x")
        r.axis = RotationAxis::X;
      else if (axis == "y")
        r.axis = RotationAxis::Y;
      else if (axis == "z")
        r.axis = RotationAxis::Z;
      else if (axis.size() > 1 && axis[0] == '@') {
        r.axis = RotationAxis::Azimuth;
        r.azimuth_deg = parse_double(axis.substr(1), ln);
      } else {
        throw Error("invalid_format", "line " + std::to_string(ln) + ": bad axis '" + axis + "'");
      }
      r.angle_deg = parse_double(t[3], ln);
      gates.emplace_back(r);
    } else if (op == "H") {
      need(2);
      gates.emplace_back(Hadamard{parse_int(t[1], ln)});
    } else if (op == "CNOT") {
      need(3);
      gates.emplace_back(Cnot{parse_int(t[1], ln), parse_int(t[2], ln)});
    } else if (op == "INEPT") {
      need(3);
      gates.emplace_back(Inept{parse_int(t[1], ln), parse_int(t[2], ln)});
    } else if (op == "CPHASE") {
      need(4);
      gates.emplace_back(ControlledPhase{parse_int(t[1], ln), parse_int(t[2], ln),
                                         parse_double(t[3], ln)});
    } else if (op == "PERM") {
      const auto colon = std::find(t.begin(), t.end(), ":");
      if (colon == t.end())
        throw Error("invalid_format", "line " + std::to_string(ln) + ": PERM needs ':'");
      Permutation p;
      for (auto it = t.begin() + 1; it != colon; ++it) p.spins.push_back(parse_int(*it, ln));
      for (auto it = colon + 1; it != t.end(); ++it)
        p.map.push_back(static_cast<std::size_t>(parse_int(*it, ln)));
      gates.emplace_back(std::move(p));
    } else if (op == "QFT") {
      if (t.size() < 3)
        throw Error("invalid_format", "line " + std::to_string(ln) + ": QFT needs spins and a sign");
      QftBlock q;
      for (std::size_t k = 1; k + 1 < t.size(); ++k) q.spins.push_back(parse_int(t[k], ln));
      if (t.back() == "+")
        q.sign = FourierSign::Plus;
      else if (t.back() == "-")
        q.sign = FourierSign::Minus;
      else
        throw Error("invalid_format", "line " + std::to_string(ln) + ": QFT sign must be + or -");
      gates.emplace_back(std::move(q));
    } else {
      throw Error("invalid_format", "line " + std::to_string(ln) + ": unknown gate '" + op + "'");
    }
    for (int s : gate_spins(gates.back())) max_spin = std::max(max_spin, s);
  }
  Circuit c(declared.value_or(std::max(1, max_spin + 1)));
  for (Gate &g : gates) c.add(std::move(g));
  return c;
}

}  // namespace nmrqc
