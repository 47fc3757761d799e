// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ALLOKIT_FRAMES_HPP
#define ALLOKIT_FRAMES_HPP

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "allokit/allophone.hpp"
#include "allokit/error.hpp"

namespace allokit {

/// T x (N+1) posteriors. labels[0] is always the blank.
struct PosteriorFrames {
  std::vector<std::string> labels;
  std::vector<Distribution> rows;

  static PosteriorFrames over(const SymbolInventory& inv) {
    PosteriorFrames f;
    f.labels.reserve(inv.dim());
    f.labels.emplace_back(kBlankSymbol);
    for (const auto& s : inv.symbols()) f.labels.push_back(s);
    return f;
  }

  std::size_t size() const noexcept { return rows.size(); }
  std::size_t dim() const noexcept { return labels.size(); }

  void validate() const {
    if (labels.empty() || labels.front() != kBlankSymbol) {
      throw Error(Errc::DimensionMismatch, "first label must be the blank");
    }
    if (std::set<std::string>(labels.begin(), labels.end()).size() !=
        labels.size()) {
      throw Error(Errc::DimensionMismatch, "duplicate frame labels");
    }
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != labels.size()) {
        throw Error(Errc::DimensionMismatch,
                    "frame " + std::to_string(t) + " has " +
                        std::to_string(rows[t].size()) + " values, expected " +
                        std::to_string(labels.size()));
      }
      validate_distribution(rows[t]);
    }
  }

  friend bool operator==(const PosteriorFrames&, const PosteriorFrames&) = default;
};

/// Frame-wise project(); the output is labeled with the matrix's phonemes.
inline PosteriorFrames project_frames(const PosteriorFrames& frames,
                                      const AllophoneMatrix& m,
                                      Pooling pooling = Pooling::Max) {
  if (frames.dim() != m.cols() + 1) {
    throw Error(Errc::DimensionMismatch,
                "frames have " + std::to_string(frames.dim()) +
                    " columns, matrix expects " + std::to_string(m.cols() + 1));
  }
  PosteriorFrames out = PosteriorFrames::over(m.phonemes());
  out.rows.reserve(frames.size());
  for (const auto& row : frames.rows) out.rows.push_back(project(row, m, pooling));
  return out;
}

namespace detail {
inline constexpr double kFrameFileSlack = 1e-6;
}

/// Frames file: a header line with the column labels (first one "<blank>"),
/// then one line per frame of space-separated probabilities. Rows whose sum
/// is within 1e-6 of one are rescaled to sum to one exactly, so printed
/// decimals round-trip.
inline PosteriorFrames parse_frames(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  PosteriorFrames f;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') continue;
    std::istringstream ls(line);
    if (!have_header) {
      std::string label;
      while (ls >> label) f.labels.push_back(label);
      have_header = true;
      continue;
    }
    Distribution row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) +
                                          ": bad number '" + tok + "'");
      }
    }
    double total = 0.0;
    for (double v : row) total += v;
    if (std::isfinite(total) && std::abs(total - 1.0) <= detail::kFrameFileSlack &&
        total > 0.0) {
      for (double& v : row) v /= total;
    }
    f.rows.push_back(std::move(row));
  }
  if (!have_header) throw Error(Errc::ParseError, "frames file has no header");
  f.validate();
  return f;
}

inline std::string format_frames(const PosteriorFrames& f) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < f.labels.size(); ++i) {
    out << (i ? " " : "") << f.labels[i];
  }
  out << '\n';
  for (const auto& row : f.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace allokit

#endif  // ALLOKIT_FRAMES_HPP
