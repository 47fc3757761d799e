// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only reference implementations. Nothing here calls into the code it
// is used to check.

#ifndef ALLOKIT_TESTS_ORACLES_HPP
#define ALLOKIT_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace allokit::testing {

/// Top-down recursive Levenshtein with memoization.
template <typename T>
class RecursiveLevenshtein {
 public:
  RecursiveLevenshtein(const std::vector<T>& a, const std::vector<T>& b)
      : a_(a), b_(b), memo_((a.size() + 1) * (b.size() + 1), kUnset) {}

  std::size_t operator()() { return go(a_.size(), b_.size()); }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  std::size_t go(std::size_t i, std::size_t j) {
    if (i == 0) return j;
    if (j == 0) return i;
    std::size_t& slot = memo_[i * (b_.size() + 1) + j];
    if (slot != kUnset) return slot;
    std::size_t best = go(i - 1, j - 1) + (a_[i - 1] == b_[j - 1] ? 0 : 1);
    best = std::min(best, go(i - 1, j) + 1);
    best = std::min(best, go(i, j - 1) + 1);
    return slot = best;
  }

  const std::vector<T>& a_;
  const std::vector<T>& b_;
  std::vector<std::size_t> memo_;
};

template <typename T>
std::size_t levenshtein(const std::vector<T>& a, const std::vector<T>& b) {
  return RecursiveLevenshtein<T>(a, b)();
}

/// Every string over {0..alphabet-1} of length <= max_len.
inline std::vector<std::vector<int>> all_strings(int alphabet, std::size_t max_len) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> frontier{{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier) {
      for (int c = 0; c < alphabet; ++c) {
        auto t = s;
        t.push_back(c);
        next.push_back(std::move(t));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

struct BruteSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t distance = 0;
};

/// Scans every span [s, e) of doc; minimum distance, then lowest start,
/// then lowest end.
template <typename T>
BruteSpan brute_semi_global(const std::vector<T>& query,
                            const std::vector<T>& doc) {
  BruteSpan best{0, 0, query.size()};
  bool have = false;
  for (std::size_t s = 0; s <= doc.size(); ++s) {
    for (std::size_t e = s; e <= doc.size(); ++e) {
      std::vector<T> span(doc.begin() + static_cast<std::ptrdiff_t>(s),
                          doc.begin() + static_cast<std::ptrdiff_t>(e));
      const std::size_t d = levenshtein(query, span);
      if (!have || d < best.distance) {
        best = {s, e, d};
        have = true;
      }
    }
  }
  return best;
}

/// Phone alphabet used by the random generators; includes multi-codepoint
/// segments.
inline const std::vector<std::string>& phone_alphabet() {
  static const std::vector<std::string> kPhones = {
      "p", "pʰ", "b", "t", "tʰ", "d", "k", "kʰ", "ɡ", "t͡ʃ", "d͡ʒ", "s",
      "ʃ", "x", "χ", "m", "n", "ŋ", "l", "ɾ", "i", "e", "a", "o", "u",
      "ə", "ɛ", "ɔ", "iː", "ã"};
  return kPhones;
}

}  // namespace allokit::testing

#endif  // ALLOKIT_TESTS_ORACLES_HPP
