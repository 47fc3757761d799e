// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Best-path CTC decoding and phoneme error rate.

#ifndef ALLOKIT_DECODE_HPP
#define ALLOKIT_DECODE_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "allokit/allophone.hpp"
#include "allokit/error.hpp"
#include "allokit/frames.hpp"
#include "allokit/ipa.hpp"

namespace allokit {

/// Per-frame argmax, collapse repeats, drop blanks. Returns column indices.
inline std::vector<std::size_t> ctc_greedy_path(const PosteriorFrames& frames) {
  std::vector<std::size_t> out;
  std::size_t prev = kBlankIndex;
  bool first = true;
  for (const auto& row : frames.rows) {
    const std::size_t best = argmax(row);
    if ((first || best != prev) && best != kBlankIndex) out.push_back(best);
    prev = best;
    first = false;
  }
  return out;
}

/// Decoded labels, each tokenized into segments.
inline SegmentString ctc_greedy_decode(const PosteriorFrames& frames) {
  frames.validate();
  SegmentString out;
  for (std::size_t idx : ctc_greedy_path(frames)) {
    SegmentString part = tokenize(frames.labels[idx]);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// Result of aligning a hypothesis against a reference.
struct EvalResult {
  std::size_t distance = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t ref_len = 0;

  /// distance / ref_len; throws EmptyReference when ref_len is 0.
  double per() const {
    if (ref_len == 0) throw Error(Errc::EmptyReference, "reference is empty");
    return static_cast<double>(distance) / static_cast<double>(ref_len);
  }

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

/// Unit-cost Levenshtein over whole symbols. Counts come from one optimal
/// alignment, traced back from the end preferring substitution (or match),
/// then deletion, then insertion.
template <typename T>
EvalResult edit_distance(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> dp((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) dp[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    dp[i * w] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub =
          dp[(i - 1) * w + (j - 1)] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t del = dp[(i - 1) * w + j] + 1;
      const std::size_t ins = dp[i * w + (j - 1)] + 1;
      dp[i * w + j] = std::min({sub, del, ins});
    }
  }

  EvalResult r;
  r.distance = dp[n * w + m];
  r.ref_len = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = dp[i * w + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (here == dp[(i - 1) * w + (j - 1)] + (same ? 0 : 1)) {
        if (!same) ++r.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == dp[(i - 1) * w + j] + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  return r;
}

inline EvalResult edit_distance(const SegmentString& ref,
                                const SegmentString& hyp) {
  return edit_distance(std::span<const Segment>(ref),
                       std::span<const Segment>(hyp));
}

/// Micro-averaged error rate: total errors over total reference length.
struct ErrorRate {
  std::size_t errors = 0;
  std::size_t ref_len = 0;

  double value() const {
    if (ref_len == 0) throw Error(Errc::EmptyReference, "no reference segments");
    return static_cast<double>(errors) / static_cast<double>(ref_len);
  }

  ErrorRate& operator+=(const ErrorRate& o) {
    errors += o.errors;
    ref_len += o.ref_len;
    return *this;
  }
};

struct UtterancePair {
  SegmentString ref;
  SegmentString hyp;
};

/// Every reference must be non-empty.
inline ErrorRate corpus_per(std::span<const UtterancePair> pairs,
                            std::vector<EvalResult>* per_utterance = nullptr) {
  ErrorRate total;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].ref.empty()) {
      throw Error(Errc::EmptyReference,
                  "utterance " + std::to_string(k) + " has an empty reference");
    }
    EvalResult r = edit_distance(pairs[k].ref, pairs[k].hyp);
    total += {r.distance, r.ref_len};
    if (per_utterance != nullptr) per_utterance->push_back(r);
  }
  if (total.ref_len == 0) {
    throw Error(Errc::EmptyReference, "no utterances to score");
  }
  return total;
}

}  // namespace allokit

#endif  // ALLOKIT_DECODE_HPP
