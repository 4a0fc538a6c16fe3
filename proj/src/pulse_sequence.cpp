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

#include "nmrqc/pulse_sequence.hpp"

#include <cmath>
#include <istream>
#include <optional>
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

void check_duration(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error("invalid_event", "durations must be finite and nonnegative");
}

}  // namespace

double event_duration(const PulseEvent &e) {
  if (const auto *d = std::get_if<Delay>(&e)) return d->duration_s;
  if (const auto *s = std::get_if<SoftPulse>(&e)) return s->duration_s;
  return 0.0;
}

PulseSequence::PulseSequence(int spins) : spins_(spins), frames_(static_cast<std::size_t>(spins), 0.0) {
  if (spins < 1) throw Error("invalid_system", "sequence needs at least one spin");
}

double PulseSequence::duration() const {
  double total = 0.0;
  for (const PulseEvent &e : events_) total += event_duration(e);
  return total;
}

PulseSequence &PulseSequence::add(PulseEvent e) {
  auto check_spin = [this](int s) {
    if (s < 0 || s >= spins_)
      throw Error("index_out_of_range", "spin " + std::to_string(s) + " out of range");
  };
  std::visit(Overloaded{
                 [&](const HardPulse &p) {
                   if (p.spins.empty()) throw Error("invalid_event", "hard pulse needs spins");
                   for (int s : p.spins) check_spin(s);
                 },
                 [&](const SoftPulse &p) {
                   check_duration(p.duration_s);
                   if (p.amplitude_hz < 0.0) throw Error("invalid_event", "negative amplitude");
                 },
                 [&](const Delay &d) { check_duration(d.duration_s); },
                 [&](const Crusher &) {},
                 [&](const FrameShift &f) { check_spin(f.spin); },
             },
             e);
  events_.push_back(std::move(e));
  return *this;
}

PulseSequence &PulseSequence::append(const PulseSequence &other) {
  if (other.spins() != spins_) throw Error("dimension_mismatch", "sequences differ in spin count");
  for (const PulseEvent &e : other.events()) events_.push_back(e);
  return *this;
}

void PulseSequence::set_frames_deg(std::vector<double> frames) {
  if (frames.size() != static_cast<std::size_t>(spins_))
    throw Error("dimension_mismatch", "frame report needs one phase per spin");
  frames_ = std::move(frames);
}

void write_sequence(std::ostream &out, const PulseSequence &seq) {
  const auto old_precision = out.precision(17);
  out << "SPINS " << seq.spins() << "\n";
  for (const PulseEvent &e : seq.events()) {
    std::visit(Overloaded{
                   [&](const HardPulse &p) {
                     out << "HARD ";
                     for (std::size_t k = 0; k < p.spins.size(); ++k) out << (k ? "," : "") << p.spins[k];
                     out << ' ' << p.angle_deg << "deg " << p.phase_deg << "deg\n";
                   },
                   [&](const SoftPulse &p) {
                     out << "SOFT " << p.channel << ' ' << p.carrier_hz << "Hz " << p.amplitude_hz
                         << "Hz " << p.duration_s << "s " << p.phase_deg << "deg\n";
                   },
                   [&](const Delay &d) { out << "DELAY " << d.duration_s << "s\n"; },
                   [&](const Crusher &) { out << "CRUSH\n"; },
                   [&](const FrameShift &f) { out << "FRAME " << f.spin << ' ' << f.phase_deg << "deg\n"; },
               },
               e);
  }
  out << "FRAMES";
  for (double f : seq.frames_deg()) out << ' ' << f << "deg";
  out << "\n";
  out.precision(old_precision);
}

namespace {

double parse_unit(const std::string &tok, const std::string &unit, int line_no) {
  if (tok.size() <= unit.size() || tok.compare(tok.size() - unit.size(), unit.size(), unit) != 0)
    throw Error("invalid_format", "line " + std::to_string(line_no) + ": expected a value in " +
                                      unit + ", got '" + tok + "'");
  const std::string number = tok.substr(0, tok.size() - unit.size());
  try {
    std::size_t used = 0;
    const double v = std::stod(number, &used);
    if (used != number.size()) throw std::invalid_argument(number);
    return v;
  } catch (const std::exception &) {
    throw Error("invalid_format", "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  }
}

int parse_index(const std::string &tok, int line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw Error("invalid_format", "line " + std::to_string(line_no) + ": bad index '" + tok + "'");
  }
}

}  // namespace

PulseSequence read_sequence(std::istream &in) {
  std::string raw;
  int line_no = 0;
  std::optional<PulseSequence> seq;
  std::vector<double> frames;
  bool have_frames = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> t;
    for (std::string tok; ls >> tok;) t.push_back(tok);
    if (t.empty()) continue;
    const std::string &op = t[0];
    auto need = [&](std::size_t count) {
      if (t.size() != count)
        throw Error("invalid_format", "line " + std::to_string(line_no) + ": '" + op +
                                          "' expects " + std::to_string(count - 1) + " fields");
    };
    if (op == "SPINS") {
      need(2);
      seq.emplace(parse_index(t[1], line_no));
      continue;
    }
    if (!seq) throw Error("invalid_format", "sequence must start with SPINS");
    if (have_frames) throw Error("invalid_format", "FRAMES must be the last line");
    if (op == "HARD") {
      need(4);
      HardPulse p;
      std::istringstream list(t[1]);
      for (std::string s; std::getline(list, s, ',');) p.spins.push_back(parse_index(s, line_no));
      p.angle_deg = parse_unit(t[2], "deg", line_no);
      p.phase_deg = parse_unit(t[3], "deg", line_no);
      seq->add(std::move(p));
    } else if (op == "SOFT") {
      need(6);
      seq->add(SoftPulse{t[1], parse_unit(t[2], "Hz", line_no), parse_unit(t[3], "Hz", line_no),
                         parse_unit(t[4], "s", line_no), parse_unit(t[5], "deg", line_no)});
    } else if (op == "DELAY") {
      need(2);
      seq->add(Delay{parse_unit(t[1], "s", line_no)});
    } else if (op == "CRUSH") {
      need(1);
      seq->add(Crusher{});
    } else if (op == "FRAME") {
      need(3);
      seq->add(FrameShift{parse_index(t[1], line_no), parse_unit(t[2], "deg", line_no)});
    } else if (op == "FRAMES") {
      for (std::size_t k = 1; k < t.size(); ++k) frames.push_back(parse_unit(t[k], "deg", line_no));
      have_frames = true;
    } else {
      throw Error("invalid_format", "line " + std::to_string(line_no) + ": unknown event '" + op + "'");
    }
  }
  if (!seq) throw Error("invalid_format", "empty sequence file");
  if (have_frames) seq->set_frames_deg(std::move(frames));
  return *seq;
}

}  // namespace nmrqc
