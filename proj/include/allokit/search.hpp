// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Approximate phonetic search over phone-transcribed documents.
//
// A query matches a document span with the fewest unit-cost edits; the
// whole query must be aligned but the span may start and end anywhere in
// the document. Candidates are pruned with a segment n-gram index using the
// q-gram lemma: a span within k edits of a query of length m shares at
// least m - n + 1 - k*n of the query's n-gram positions. When that bound is
// not positive every document is scanned.

#ifndef ALLOKIT_SEARCH_HPP
#define ALLOKIT_SEARCH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "allokit/error.hpp"
#include "allokit/ipa.hpp"

namespace allokit {

struct PhoneDoc {
  std::string doc_id;
  SegmentString phones;
  std::optional<std::string> meta;

  friend bool operator==(const PhoneDoc&, const PhoneDoc&) = default;
};

struct SearchHit {
  std::string doc_id;
  std::size_t start = 0;  // segment offsets, [start, end)
  std::size_t end = 0;
  std::size_t distance = 0;
  double normalized = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Best semi-global match of a query inside one sequence.
struct SpanMatch {
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t distance = 0;

  friend bool operator==(const SpanMatch&, const SpanMatch&) = default;
};

namespace detail {

// Entry j is the best distance of `query` against any span of `doc` that
// ends at offset j.
inline std::vector<std::size_t> semi_global_by_end(
    const std::vector<std::uint32_t>& query,
    const std::vector<std::uint32_t>& doc) {
  const std::size_t m = query.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::vector<std::size_t> by_end(doc.size() + 1);
  for (std::size_t i = 0; i <= m; ++i) prev[i] = i;
  by_end[0] = prev[m];
  for (std::size_t j = 1; j <= doc.size(); ++j) {
    cur[0] = 0;
    for (std::size_t i = 1; i <= m; ++i) {
      cur[i] = std::min({prev[i - 1] + (query[i - 1] == doc[j - 1] ? 0 : 1),
                         prev[i] + 1, cur[i - 1] + 1});
    }
    by_end[j] = cur[m];
    std::swap(prev, cur);
  }
  return by_end;
}

}  // namespace detail

/// Minimum-distance span; ties go to the lowest start, then the lowest end.
inline SpanMatch best_span(const std::vector<std::uint32_t>& query,
                           const std::vector<std::uint32_t>& doc) {
  const std::vector<std::size_t> by_end = detail::semi_global_by_end(query, doc);
  const std::size_t best = *std::min_element(by_end.begin(), by_end.end());

  // Same recurrence on the reversed strings gives, for each start, the best
  // distance over spans beginning there.
  std::vector<std::uint32_t> rq(query.rbegin(), query.rend());
  std::vector<std::uint32_t> rd(doc.rbegin(), doc.rend());
  const std::vector<std::size_t> by_rev_end = detail::semi_global_by_end(rq, rd);
  std::size_t start = 0;
  for (std::size_t s = 0; s <= doc.size(); ++s) {
    if (by_rev_end[doc.size() - s] == best) {
      start = s;
      break;
    }
  }

  // Plain edit distance from the chosen start to every end.
  const std::size_t m = query.size();
  std::vector<std::size_t> col(m + 1);
  for (std::size_t i = 0; i <= m; ++i) col[i] = i;
  if (col[m] == best) return {start, start, best};
  for (std::size_t j = start + 1; j <= doc.size(); ++j) {
    std::size_t diag = col[0];
    col[0] = j - start;
    for (std::size_t i = 1; i <= m; ++i) {
      const std::size_t up = col[i];
      col[i] = std::min({diag + (query[i - 1] == doc[j - 1] ? 0 : 1), up + 1,
                         col[i - 1] + 1});
      diag = up;
    }
    if (col[m] == best) return {start, j, best};
  }
  throw Error(Errc::BadArgument, "internal: optimal span not recovered");
}

/// Immutable search index over a fixed document set.
class SearchIndex {
 public:
  static constexpr int kSnapshotVersion = 1;

  explicit SearchIndex(std::vector<PhoneDoc> docs, std::size_t ngram = 3)
      : docs_(std::move(docs)), ngram_(ngram) {
    if (ngram_ == 0) throw Error(Errc::BadArgument, "ngram must be positive");
    std::set<std::string> ids;
    for (const auto& d : docs_) {
      if (d.phones.empty()) throw Error(Errc::EmptyDoc, d.doc_id);
      if (!ids.insert(d.doc_id).second) {
        throw Error(Errc::DuplicateDocId, d.doc_id);
      }
    }
    encoded_.reserve(docs_.size());
    for (const auto& d : docs_) {
      std::vector<std::uint32_t> ids_seq;
      ids_seq.reserve(d.phones.size());
      for (const auto& s : d.phones) ids_seq.push_back(intern(s.text()));
      encoded_.push_back(std::move(ids_seq));
    }
    for (std::size_t di = 0; di < encoded_.size(); ++di) {
      const auto& seq = encoded_[di];
      if (seq.size() < ngram_) continue;
      for (std::size_t p = 0; p + ngram_ <= seq.size(); ++p) {
        auto& posting = postings_[gram_key(seq, p)];
        if (posting.empty() || posting.back() != di) posting.push_back(di);
      }
    }
  }

  const std::vector<PhoneDoc>& docs() const noexcept { return docs_; }
  std::size_t ngram() const noexcept { return ngram_; }

  /// Minimum number of query n-gram positions a document must contain to
  /// hold a match within max_edits. Zero or less means no pruning.
  std::ptrdiff_t pruning_threshold(std::size_t m, std::size_t max_edits) const {
    return static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(ngram_) +
           1 - static_cast<std::ptrdiff_t>(max_edits * ngram_);
  }

  /// Up to k hits with distance / |query| <= max_normalized, ordered by
  /// (normalized, doc_id, start); one hit per document.
  std::vector<SearchHit> search(const SegmentString& query, std::size_t k,
                                double max_normalized) const {
    return run(query, k, max_normalized, /*exhaustive=*/false);
  }

  /// Same contract as search() without n-gram pruning.
  std::vector<SearchHit> search_exhaustive(const SegmentString& query,
                                           std::size_t k,
                                           double max_normalized) const {
    return run(query, k, max_normalized, /*exhaustive=*/true);
  }

  /// Structured-text snapshot (JSON with a version field). The n-gram
  /// postings are rebuilt on load.
  std::string snapshot() const {
    nlohmann::ordered_json doc;
    doc["format"] = "allokit-search-index";
    doc["version"] = kSnapshotVersion;
    doc["ngram"] = ngram_;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& d : docs_) {
      nlohmann::ordered_json jd;
      jd["id"] = d.doc_id;
      std::vector<std::string> segs;
      for (const auto& s : d.phones) segs.push_back(s.text());
      jd["phones"] = segs;
      if (d.meta) jd["meta"] = *d.meta;
      arr.push_back(std::move(jd));
    }
    doc["docs"] = std::move(arr);
    return doc.dump() + "\n";
  }

  static SearchIndex from_snapshot(std::string_view text) {
    using nlohmann::json;
    try {
      json doc = json::parse(text.begin(), text.end());
      if (doc.at("format") != "allokit-search-index") {
        throw Error(Errc::ParseError, "not an allokit index snapshot");
      }
      if (doc.at("version") != kSnapshotVersion) {
        throw Error(Errc::ParseError, "unsupported snapshot version " +
                                          doc.at("version").dump());
      }
      std::vector<PhoneDoc> docs;
      for (const auto& jd : doc.at("docs")) {
        PhoneDoc d;
        d.doc_id = jd.at("id").get<std::string>();
        for (const auto& s : jd.at("phones")) {
          d.phones.push_back(Segment::parse(s.get<std::string>()));
        }
        if (jd.contains("meta")) d.meta = jd["meta"].get<std::string>();
        docs.push_back(std::move(d));
      }
      return SearchIndex(std::move(docs), doc.at("ngram").get<std::size_t>());
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError, std::string("snapshot: ") + e.what());
    }
  }

 private:
  std::uint32_t intern(const std::string& s) {
    auto [it, inserted] =
        symbols_.emplace(s, static_cast<std::uint32_t>(symbols_.size()));
    return it->second;
  }

  std::string gram_key(const std::vector<std::uint32_t>& seq,
                       std::size_t pos) const {
    std::string key(ngram_ * sizeof(std::uint32_t), '\0');
    for (std::size_t i = 0; i < ngram_; ++i) {
      const std::uint32_t v = seq[pos + i];
      for (std::size_t b = 0; b < 4; ++b) {
        key[i * 4 + b] = static_cast<char>((v >> (8 * b)) & 0xFF);
      }
    }
    return key;
  }

  std::vector<SearchHit> run(const SegmentString& query, std::size_t k,
                             double max_normalized, bool exhaustive) const {
    if (query.empty()) throw Error(Errc::EmptyQuery, "query has no segments");
    if (k == 0) throw Error(Errc::BadArgument, "k must be at least 1");
    if (!(max_normalized >= 0.0)) {
      throw Error(Errc::BadArgument, "max_normalized must be non-negative");
    }
    const std::size_t m = query.size();
    const std::size_t max_edits = static_cast<std::size_t>(
        std::floor(max_normalized * static_cast<double>(m) + 1e-9));

    // Query symbols unknown to the index get ids past the interned range;
    // they can never match a document segment.
    std::vector<std::uint32_t> q;
    q.reserve(m);
    std::uint32_t fresh = static_cast<std::uint32_t>(symbols_.size());
    std::map<std::string, std::uint32_t> unknown;
    for (const auto& s : query) {
      if (auto it = symbols_.find(s.text()); it != symbols_.end()) {
        q.push_back(it->second);
      } else {
        auto [u, inserted] = unknown.emplace(s.text(), fresh);
        if (inserted) ++fresh;
        q.push_back(u->second);
      }
    }

    std::vector<std::size_t> candidates;
    const std::ptrdiff_t threshold = pruning_threshold(m, max_edits);
    if (exhaustive || threshold <= 0) {
      candidates.resize(docs_.size());
      for (std::size_t i = 0; i < docs_.size(); ++i) candidates[i] = i;
    } else {
      std::vector<std::size_t> shared(docs_.size(), 0);
      for (std::size_t p = 0; p + ngram_ <= m; ++p) {
        auto it = postings_.find(gram_key(q, p));
        if (it == postings_.end()) continue;
        for (std::size_t di : it->second) ++shared[di];
      }
      for (std::size_t i = 0; i < docs_.size(); ++i) {
        if (static_cast<std::ptrdiff_t>(shared[i]) >= threshold) {
          candidates.push_back(i);
        }
      }
    }

    std::vector<SearchHit> hits;
    for (std::size_t di : candidates) {
      const SpanMatch sm = best_span(q, encoded_[di]);
      if (sm.distance > max_edits) continue;
      hits.push_back({docs_[di].doc_id, sm.start, sm.end, sm.distance,
                      static_cast<double>(sm.distance) / static_cast<double>(m)});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
      if (a.distance != b.distance) return a.distance < b.distance;
      if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
      return a.start < b.start;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
  }

  std::vector<PhoneDoc> docs_;
  std::size_t ngram_;
  std::vector<std::vector<std::uint32_t>> encoded_;
  std::unordered_map<std::string, std::uint32_t> symbols_;
  std::unordered_map<std::string, std::vector<std::size_t>> postings_;
};

inline SearchIndex index_build(std::vector<PhoneDoc> docs, std::size_t ngram = 3) {
  return SearchIndex(std::move(docs), ngram);
}

inline std::vector<SearchHit> search(const SearchIndex& idx,
                                     const SegmentString& query, std::size_t k,
                                     double max_normalized) {
  return idx.search(query, k, max_normalized);
}

/// Corpus file: one document per line, "doc_id<TAB>segment segment ...",
/// with an optional third tab-separated column of free-text metadata.
inline std::vector<PhoneDoc> parse_corpus(std::string_view text) {
  std::vector<PhoneDoc> docs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(Errc::ParseError, "corpus line " + std::to_string(line_no) +
                                        ": expected doc_id<TAB>segments");
    }
    PhoneDoc d;
    d.doc_id = line.substr(0, tab);
    std::string rest = line.substr(tab + 1);
    if (const std::size_t tab2 = rest.find('\t'); tab2 != std::string::npos) {
      d.meta = rest.substr(tab2 + 1);
      rest.resize(tab2);
    }
    try {
      d.phones = parse_segments(rest);
    } catch (const Error& e) {
      throw Error(Errc::ParseError,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
    docs.push_back(std::move(d));
  }
  return docs;
}

}  // namespace allokit

#endif  // ALLOKIT_SEARCH_HPP
