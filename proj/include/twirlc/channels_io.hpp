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

// PTM CSV: first line "n,<qubits>", then 4^n rows of comma-separated entries.
// Kraus JSON: [[[ [re, im], ... ], ...], ...] -- a list of row-major matrices.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twirlc/channels.hpp"

namespace twirlc {

inline std::string ptm_to_csv(const SuperOp& e) {
  std::ostringstream os;
  os << "n," << e.n() << "\n";
  char buf[40];
  for (Eigen::Index r = 0; r < e.matrix().rows(); ++r) {
    for (Eigen::Index c = 0; c < e.matrix().cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", e(r, c));
      os << (c ? "," : "") << buf;
    }
    os << "\n";
  }
  return os.str();
}

inline SuperOp ptm_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 1;
  if (!std::getline(is, line) || line.rfind("n,", 0) != 0)
    throw ParseError("expected header 'n,<qubits>'", 1, 1);
  int n = 0;
  try {
    n = std::stoi(line.substr(2));
  } catch (const std::exception&) {
    throw ParseError("invalid qubit count", 1, 3);
  }
  if (n < 0 || n > kMaxPtmQubits) throw ParseError("qubit count out of range", 1, 3);
  const auto d = static_cast<Eigen::Index>(detail::pow4(n));
  MatrixR m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    ++line_no;
    if (!std::getline(is, line)) throw ParseError("missing PTM row", line_no, 1);
    std::istringstream row(line);
    std::string cell;
    Eigen::Index c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= d) throw ParseError("too many columns", line_no, 1);
      try {
        m(r, c++) = std::stod(cell);
      } catch (const std::exception&) {
        throw ParseError("invalid number '" + cell + "'", line_no, 1);
      }
    }
    if (c != d) throw ParseError("expected " + std::to_string(d) + " columns", line_no, 1);
  }
  return SuperOp(n, std::move(m));
}

inline nlohmann::json kraus_to_json(const std::vector<MatrixC>& ops) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& k : ops) {
    nlohmann::json mat = nlohmann::json::array();
    for (Eigen::Index r = 0; r < k.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(r, c).real(), k(r, c).imag()});
      mat.push_back(row);
    }
    out.push_back(mat);
  }
  return out;
}

inline std::vector<MatrixC> kraus_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("Kraus JSON: expected an array of matrices");
  std::vector<MatrixC> ops;
  for (const auto& mat : j) {
    if (!mat.is_array() || mat.empty()) throw std::invalid_argument("Kraus JSON: matrix must be a nonempty array");
    const auto rows = static_cast<Eigen::Index>(mat.size());
    const auto cols = static_cast<Eigen::Index>(mat[0].size());
    MatrixC k(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (static_cast<Eigen::Index>(mat[r].size()) != cols) throw std::invalid_argument("Kraus JSON: ragged matrix");
      for (Eigen::Index c = 0; c < cols; ++c) {
        const auto& e = mat[r][c];
        if (e.is_number()) {
          k(r, c) = e.get<double>();
        } else if (e.is_array() && e.size() == 2) {
          k(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        } else {
          throw std::invalid_argument("Kraus JSON: entries must be numbers or [re, im]");
        }
      }
    }
    ops.push_back(std::move(k));
  }
  return ops;
}

}  // namespace twirlc
