// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Universal phone inventory, per-language allophone incidence matrices and
// the projection of phone posteriors onto a language's phonemes.
//
// Both the phone axis and the phoneme axis reserve index 0 for the CTC
// blank; symbol i of an inventory lives at index i + 1.

#ifndef ALLOKIT_ALLOPHONE_HPP
#define ALLOKIT_ALLOPHONE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "allokit/allovera.hpp"
#include "allokit/error.hpp"

namespace allokit {

inline constexpr std::string_view kBlankSymbol = "<blank>";
inline constexpr std::size_t kBlankIndex = 0;
inline constexpr double kDistributionTolerance = 1e-9;

/// Ordered symbol set with a blank at index 0. Used for the universal phone
/// inventory and for any phoneme axis.
class SymbolInventory {
 public:
  SymbolInventory() = default;

  /// Symbols are deduplicated and sorted by codepoint order.
  explicit SymbolInventory(std::vector<std::string> symbols) {
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    symbols_ = std::move(symbols);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i] == kBlankSymbol) {
        throw Error(Errc::BadArgument, "the blank is not an IPA symbol");
      }
      index_.emplace(symbols_[i], i + 1);
    }
  }

  /// Symbols without the blank.
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  /// Number of columns including the blank.
  std::size_t dim() const noexcept { return symbols_.size() + 1; }

  std::optional<std::size_t> index_of(std::string_view symbol) const {
    auto it = index_.find(std::string(symbol));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string_view symbol_at(std::size_t index) const {
    if (index == kBlankIndex) return kBlankSymbol;
    if (index > symbols_.size()) {
      throw Error(Errc::DimensionMismatch,
                  "index " + std::to_string(index) + " out of range");
    }
    return symbols_[index - 1];
  }

  friend bool operator==(const SymbolInventory& a, const SymbolInventory& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

using UniversalInventory = SymbolInventory;

/// Sorted union of every phone in the database.
inline UniversalInventory build_universal_inventory(const AlloDb& db) {
  if (db.empty()) throw Error(Errc::EmptyDb, "cannot build an inventory");
  const auto phones = phone_set(db);
  return UniversalInventory({phones.begin(), phones.end()});
}

/// Binary phoneme x phone incidence for one language. Rows follow
/// phonemes().symbols(); columns follow the universal inventory, blank
/// excluded.
class AllophoneMatrix {
 public:
  AllophoneMatrix(LanguageKey language, SymbolInventory phonemes,
                  std::size_t phone_count)
      : language_(std::move(language)),
        phonemes_(std::move(phonemes)),
        cols_(phone_count),
        cells_(phonemes_.symbols().size() * phone_count, 0),
        row_phones_(phonemes_.symbols().size()) {}

  const LanguageKey& language() const noexcept { return language_; }
  const SymbolInventory& phonemes() const noexcept { return phonemes_; }
  std::size_t rows() const noexcept { return phonemes_.symbols().size(); }
  std::size_t cols() const noexcept { return cols_; }

  /// row and col are zero-based and exclude the blank.
  bool at(std::size_t row, std::size_t col) const {
    return cells_[row * cols_ + col] != 0;
  }

  /// Columns set in `row`, ascending.
  const std::vector<std::size_t>& allophones(std::size_t row) const {
    return row_phones_[row];
  }

  void set(std::size_t row, std::size_t col) {
    if (cells_[row * cols_ + col] != 0) return;
    cells_[row * cols_ + col] = 1;
    auto& v = row_phones_[row];
    v.insert(std::upper_bound(v.begin(), v.end(), col), col);
  }

 private:
  LanguageKey language_;
  SymbolInventory phonemes_;
  std::size_t cols_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::vector<std::size_t>> row_phones_;
};

inline AllophoneMatrix build_allophone_matrix(const LanguageMapping& lang,
                                              const UniversalInventory& inv) {
  const auto phonemes = lang.phonemes();
  AllophoneMatrix m(lang.key(), SymbolInventory({phonemes.begin(), phonemes.end()}),
                    inv.symbols().size());
  for (const auto& e : lang.entries) {
    auto col = inv.index_of(e.phone);
    if (!col) {
      throw Error(Errc::PhoneNotInInventory,
                  "[" + e.phone + "] of " + lang.key().str());
    }
    auto row = m.phonemes().index_of(e.phoneme);
    m.set(*row - 1, *col - 1);
  }
  return m;
}

enum class Pooling { Max, Sum };

using Distribution = std::vector<double>;

inline void validate_distribution(const Distribution& d) {
  double total = 0.0;
  for (double v : d) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(Errc::InvalidDistribution, "negative or non-finite entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kDistributionTolerance) {
    throw Error(Errc::InvalidDistribution,
                "entries sum to " + std::to_string(total));
  }
}

struct Projection {
  /// Pooled scores before renormalization, blank at 0.
  std::vector<double> raw;
  /// raw renormalized to sum to 1.
  Distribution distribution;
};

/// Pools each phoneme's allophone probabilities and passes the blank through.
/// When none of the input mass falls on this language's phones or the blank,
/// the result is the blank-only distribution.
inline Projection project_scores(const Distribution& phone_dist,
                                 const AllophoneMatrix& m,
                                 Pooling pooling = Pooling::Max) {
  if (phone_dist.size() != m.cols() + 1) {
    throw Error(Errc::DimensionMismatch,
                "distribution has " + std::to_string(phone_dist.size()) +
                    " entries, inventory needs " + std::to_string(m.cols() + 1));
  }
  validate_distribution(phone_dist);

  Projection p;
  p.raw.assign(m.rows() + 1, 0.0);
  p.raw[kBlankIndex] = phone_dist[kBlankIndex];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double score = 0.0;
    for (std::size_t c : m.allophones(r)) {
      const double v = phone_dist[c + 1];
      score = pooling == Pooling::Max ? std::max(score, v) : score + v;
    }
    p.raw[r + 1] = score;
  }

  double total = 0.0;
  for (double v : p.raw) total += v;
  p.distribution.assign(p.raw.size(), 0.0);
  if (total <= 0.0) {
    p.distribution[kBlankIndex] = 1.0;
  } else {
    for (std::size_t i = 0; i < p.raw.size(); ++i) {
      p.distribution[i] = p.raw[i] / total;
    }
  }
  return p;
}

inline Distribution project(const Distribution& phone_dist,
                            const AllophoneMatrix& m,
                            Pooling pooling = Pooling::Max) {
  return project_scores(phone_dist, m, pooling).distribution;
}

/// Lowest index wins ties, so the blank wins any tie it takes part in.
inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace allokit

#endif  // ALLOKIT_ALLOPHONE_HPP
