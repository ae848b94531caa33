// Copyright 2026 The twirlc Authors
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

// Circuit text format, one cycle per record:
//
//   # comment
//   qubits 3
//   measure 0 1 2
//   shots 1024
//   easy q0: H q1: X q2: u(re00,im00,re01,im01,re10,im10,re11,im11)
//   hard: cnot(0,1)
//   easy q0: I
//
// Qubits omitted from an easy record get the identity.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "twirlc/circuit.hpp"

namespace twirlc {

namespace detail {

inline const std::vector<std::pair<std::string, Mat2>>& named_gates() {
  static const std::vector<std::pair<std::string, Mat2>> table{
      {"I", gates::I()}, {"X", gates::X()}, {"Y", gates::Y()},
      {"Z", gates::Z()}, {"H", gates::H()},
  };
  return table;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'" +
           (pos_ < text_.size() ? std::string(" but found '") + text_[pos_] + "'" : std::string(" at end of line")));
    ++pos_;
  }
  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  long integer() {
    skip_ws();
    long v = 0;
    auto [p, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc()) fail("expected integer");
    pos_ = static_cast<std::size_t>(p - text_.data());
    return v;
  }
  double number() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[end])))
      ++end;
    std::string tok(text_.substr(pos_, end - pos_));
    try {
      std::size_t used = 0;
      double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      pos_ = end;
      return v;
    } catch (const std::exception&) {
      fail("invalid number '" + tok + "'");
    }
  }
  int column() const { return static_cast<int>(pos_) + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column()); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace detail

inline std::string serialize(const Circuit& c) {
  std::ostringstream os;
  os << "# twirlc circuit\n";
  os << "qubits " << c.n << "\n";
  os << "measure";
  for (int q : c.measured_qubits) os << ' ' << q;
  os << "\nshots " << c.measurement.shots << "\n";
  for (const auto& cy : c.cycles) {
    if (const auto* e = std::get_if<EasyCycle>(&cy)) {
      os << "easy";
      for (int q = 0; q < e->n(); ++q) {
        os << " q" << q << ": ";
        const Mat2& g = e->gates[q];
        auto named = std::find_if(detail::named_gates().begin(), detail::named_gates().end(),
                                  [&](const auto& kv) { return kv.second == g; });
        if (named != detail::named_gates().end()) {
          os << named->first;
        } else {
          os << "u(";
          for (int k = 0; k < 4; ++k) {
            const Complex v = g(k / 2, k % 2);
            os << (k ? "," : "") << detail::format_double(v.real()) << ","
               << detail::format_double(v.imag());
          }
          os << ")";
        }
      }
      os << "\n";
    } else {
      os << "hard:";
      for (const auto& g : std::get<HardCycle>(cy).gates)
        os << " cnot(" << g.control << "," << g.target << ")";
      os << "\n";
    }
  }
  return os.str();
}

/// Parses the text format; syntax errors raise ParseError, structural
/// problems raise CircuitError from validate().
inline Circuit parse_circuit(std::string_view text) {
  Circuit c;
  std::optional<int> n;
  std::optional<std::vector<int>> measured;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (const auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    detail::LineCursor cur(line, line_no);
    if (cur.done() || cur.peek('#')) {
      if (end == text.size()) break;
      continue;
    }
    const std::string key = cur.word();
    if (key == "qubits") {
      const long v = cur.integer();
      if (v < 1 || v > 64) cur.fail("qubit count out of range");
      n = static_cast<int>(v);
    } else if (key == "measure") {
      std::vector<int> qs;
      while (!cur.done()) qs.push_back(static_cast<int>(cur.integer()));
      measured = qs;
    } else if (key == "shots") {
      c.measurement.shots = static_cast<int>(cur.integer());
    } else if (key == "easy") {
      if (!n) cur.fail("'qubits' must precede the first cycle");
      EasyCycle e = EasyCycle::identity(*n);
      std::vector<bool> given(*n, false);
      while (!cur.done()) {
        const std::string qtok = cur.word();
        if (qtok.size() < 2 || qtok[0] != 'q' ||
            !std::all_of(qtok.begin() + 1, qtok.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
          cur.fail("expected qubit label q<i>, found '" + qtok + "'");
        const int q = std::stoi(qtok.substr(1));
        if (q >= *n) cur.fail("qubit " + qtok + " out of range");
        if (given[q]) cur.fail("qubit " + qtok + " assigned twice");
        given[q] = true;
        cur.expect(':');
        const std::string gate = cur.word();
        if (gate == "u") {
          cur.expect('(');
          double v[8];
          for (int k = 0; k < 8; ++k) {
            if (k) cur.expect(',');
            v[k] = cur.number();
          }
          cur.expect(')');
          e.gates[q] << Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]),
              Complex(v[6], v[7]);
        } else {
          auto named = std::find_if(detail::named_gates().begin(), detail::named_gates().end(),
                                    [&](const auto& kv) { return kv.first == gate; });
          if (named == detail::named_gates().end()) cur.fail("unknown gate '" + gate + "'");
          e.gates[q] = named->second;
        }
      }
      c.cycles.emplace_back(std::move(e));
    } else if (key == "hard") {
      if (!n) cur.fail("'qubits' must precede the first cycle");
      cur.expect(':');
      HardCycle h;
      while (!cur.done()) {
        const std::string g = cur.word();
        if (g != "cnot") cur.fail("unknown gate '" + g + "'");
        cur.expect('(');
        const long a = cur.integer();
        cur.expect(',');
        const long b = cur.integer();
        cur.expect(')');
        h.gates.push_back(Cnot{static_cast<int>(a), static_cast<int>(b)});
      }
      c.cycles.emplace_back(std::move(h));
    } else {
      throw ParseError("unknown record '" + key + "'", line_no, 1);
    }
    if (end == text.size()) break;
  }
  if (!n) throw CircuitError("no cycles", -1);
  c.n = *n;
  if (measured) {
    c.measured_qubits = *measured;
  } else {
    c.measured_qubits.resize(c.n);
    for (int q = 0; q < c.n; ++q) c.measured_qubits[q] = q;
  }
  validate(c);
  return c;
}

}  // namespace twirlc
