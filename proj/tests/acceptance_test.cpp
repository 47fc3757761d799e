// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one line per criterion:
//
//   [PASS] 4 allophone layer (0.012 s) ...
//
// and exits non-zero if any criterion fails. Criteria 2 and 3 need the
// upstream mapping files and a PHOIBLE frequency ranking, which are not
// redistributed here; point ALLOVERA_DIR at a directory of upstream
// mapping files and PHOIBLE_RANKING at a ranking file (one phone per line,
// most widespread first) to run them. Without those they print [SKIP].

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "allokit/allokit.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace allokit::acceptance {
namespace {

using testing::kDataDir;
using testing::kFixtureDir;

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

// Collects failed checks; the first few are reported.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) {
      if (failures_.size() < 5) failures_.push_back(what);
      ++failed_;
    }
  }
  Outcome outcome(const std::string& summary) const {
    if (failed_ == 0) return {Status::Pass, summary};
    std::string msg = std::to_string(failed_) + "/" + std::to_string(checks_) +
                      " checks failed";
    for (const auto& f : failures_) msg += "; " + f;
    return {Status::Fail, msg};
  }
  std::size_t checks() const { return checks_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

std::string str(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

//===----------------------------------------------------------------------===//
// 1. fixture statistics
//===----------------------------------------------------------------------===//

Outcome fixture_statistics() {
  Checker c;
  const DbLoad loaded = load_db(kFixtureDir);
  c.expect(loaded.report.ok(), "fixtures validate");
  const DbStats st = stats(loaded.db);
  struct Row {
    const char* iso;
    std::size_t phonemes, phones;
  };
  const Row expected[] = {{"cmn", 4, 4}, {"eng", 4, 5}, {"spa", 1, 1}};
  c.expect(st.per_language.size() == 3, "3 languages");
  for (std::size_t i = 0; i < 3 && i < st.per_language.size(); ++i) {
    const auto& got = st.per_language[i];
    c.expect(got.key.iso == expected[i].iso &&
                 got.phonemes == expected[i].phonemes &&
                 got.phones == expected[i].phones,
             std::string(expected[i].iso) + " counts");
  }
  c.expect(st.total_phones == 7, "total phones 7, got " + std::to_string(st.total_phones));
  c.expect(st.total_phoneme_symbols == 7,
           "total phoneme symbols 7, got " + std::to_string(st.total_phoneme_symbols));

  AlloDb restricted;
  restricted.add(testing::mapping_of(
      "eng", {{"p", "p"}, {"pʰ", "p"}, {"i", "i"}, {"k", "k"}}));
  const DbStats rs = stats(restricted);
  c.expect(rs.per_language[0].phonemes == 3 && rs.per_language[0].phones == 4,
           "restricted English 3/4");

  const auto first = load_language(detail::read_file(kFixtureDir / "spa.json"));
  c.expect(first.mapping.has_value(), "spa loads");
  if (first.mapping) {
    const auto second = load_language(serialize(*first.mapping));
    c.expect(second.mapping && *second.mapping == *first.mapping,
             "spa round trip is lossless");
    c.expect(second.mapping && second.mapping->entries.size() == 1 &&
                 second.mapping->entries[0].environment ==
                     "optionally, before a back vowel",
             "environment preserved");
  }
  return c.outcome("cmn 4/4, eng 4/5, spa 1/1, totals 7/7; spa round trip lossless");
}

//===----------------------------------------------------------------------===//
// 2, 3. upstream data
//===----------------------------------------------------------------------===//

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : nullptr;
}

Outcome upstream_statistics() {
  const char* dir = env("ALLOVERA_DIR");
  if (dir == nullptr) return {Status::Skip, "set ALLOVERA_DIR to run"};
  Checker c;
  const DbLoad loaded = load_db(dir);
  std::string detail_msg;
  for (const auto& e : loaded.report.errors) {
    detail_msg += " [" + e.file + " " + e.path + " " + e.code + "]";
  }
  c.expect(loaded.report.ok(), "upstream files validate:" + detail_msg);
  const DbStats st = stats(loaded.db);
  bool found = false;
  for (const auto& row : st.per_language) {
    if (row.key.iso != "eng") continue;
    found = true;
    c.expect(row.phonemes == 38 && row.phones == 44,
             "English 38/44, got " + std::to_string(row.phonemes) + "/" +
                 std::to_string(row.phones));
  }
  c.expect(found, "English present");
  const long dp = static_cast<long>(st.total_phones) - 218;
  const long dq = static_cast<long>(st.total_phoneme_symbols) - 148;
  c.expect(std::labs(dp) <= 3, "total phones " + std::to_string(st.total_phones) +
                                   " (delta " + std::to_string(dp) + ")");
  c.expect(std::labs(dq) <= 3, "total phoneme symbols " +
                                   std::to_string(st.total_phoneme_symbols) +
                                   " (delta " + std::to_string(dq) + ")");
  return c.outcome("English 38/44; totals " + std::to_string(st.total_phones) +
                   " phones (delta " + std::to_string(dp) + "), " +
                   std::to_string(st.total_phoneme_symbols) +
                   " phoneme symbols (delta " + std::to_string(dq) + ")");
}

Outcome phoible_coverage_check() {
  const char* dir = env("ALLOVERA_DIR");
  const char* ranking = env("PHOIBLE_RANKING");
  if (dir == nullptr || ranking == nullptr) {
    return {Status::Skip, "set ALLOVERA_DIR and PHOIBLE_RANKING to run"};
  }
  Checker c;
  const AlloDb db = load_db(dir).db;
  const auto ranked = parse_phoible_ranking(detail::read_file(ranking));
  const std::pair<std::size_t, std::size_t> expected[] = {{50, 44}, {100, 72}, {200, 107}};
  std::string got;
  for (const auto& [n, want] : expected) {
    const std::size_t have = phoible_coverage(db, ranked, n);
    got += " " + std::to_string(n) + ":" + std::to_string(have);
    c.expect(have == want, "top " + std::to_string(n) + " expected " +
                               std::to_string(want) + ", got " + std::to_string(have));
  }
  return c.outcome("coverage" + got);
}

//===----------------------------------------------------------------------===//
// 4. allophone layer
//===----------------------------------------------------------------------===//

Outcome allophone_layer() {
  Checker c;
  const AlloDb db = testing::fig1_restricted_db();
  const auto inv = build_universal_inventory(db);
  const auto eng = build_allophone_matrix(db.find("eng"), inv);
  const auto cmn = build_allophone_matrix(db.find("cmn"), inv);
  Distribution ph(inv.dim(), 0.0);
  ph[*inv.index_of("pʰ")] = 1.0;
  c.expect(eng.phonemes().symbol_at(argmax(project(ph, eng))) == "p",
           "English [pʰ] -> /p/");
  c.expect(cmn.phonemes().symbol_at(argmax(project(ph, cmn))) == "pʰ",
           "Mandarin [pʰ] -> /pʰ/");

  std::mt19937 rng(2020);
  std::size_t trials = 0;
  while (trials < 1000) {
    const AlloDb rdb = testing::random_db(rng, 1 + static_cast<int>(rng() % 4));
    const auto rinv = build_universal_inventory(rdb);
    for (const auto& lang : rdb.languages()) {
      const auto m = build_allophone_matrix(lang, rinv);
      const auto phones = lang.phones();
      for (int t = 0; t < 5 && trials < 1000; ++t, ++trials) {
        auto it = phones.begin();
        std::advance(it, static_cast<long>(rng() % phones.size()));
        const std::size_t col = *rinv.index_of(*it);
        Distribution d(rinv.dim(), 0.0);
        d[col] = 1.0;
        const Pooling pool = rng() % 2 ? Pooling::Max : Pooling::Sum;
        const std::size_t best = argmax(project(d, m, pool));
        c.expect(best != kBlankIndex && m.at(best - 1, col - 1),
                 "argmax soundness for [" + *it + "]");
      }
    }
  }
  return c.outcome("[pʰ] -> /p/ (eng), /pʰ/ (cmn); " + std::to_string(trials) +
                   " random one-hot inputs sound");
}

//===----------------------------------------------------------------------===//
// 5. simulation ordering
//===----------------------------------------------------------------------===//

Outcome simulation_ordering() {
  Checker c;
  const AlloDb db = load_db(kFixtureDir).db;
  const Scenario base = parse_scenario(detail::read_file(kDataDir / "fig1_scenario.json"));
  const auto r0 = run_scenario(base, db);
  const double shared0 = r0.model(kSharedPhoneme).overall.value();
  c.expect(r0.model(kAllophone).overall.value() == 0.0, "allophone PER 0 at noise 0");
  c.expect(r0.model(kPrivatePhoneme).overall.value() == 0.0, "private PER 0 at noise 0");
  c.expect(shared0 > 0.0, "shared PER > 0 at noise 0");

  double shared = 0.0, allo = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Scenario sc = base;
    sc.noise = 0.2;
    sc.seed = seed;
    const auto r = run_scenario(sc, db);
    shared += r.model(kSharedPhoneme).overall.value();
    allo += r.model(kAllophone).overall.value();
  }
  shared /= 20.0;
  allo /= 20.0;
  c.expect(shared - allo > 0.0, "noise 0.2 margin " + str(shared - allo));
  return c.outcome("noise 0: shared " + str(shared0) + ", private 0, allophone 0; "
                   "noise 0.2 (20 seeds): shared " + str(shared) + " vs allophone " +
                   str(allo));
}

//===----------------------------------------------------------------------===//
// 6. edit-distance oracle
//===----------------------------------------------------------------------===//

Outcome edit_distance_oracle() {
  Checker c;
  const auto all = testing::all_strings(3, 6);
  std::size_t pairs = 0;
  for (const auto& a : all) {
    for (const auto& b : all) {
      const auto r = edit_distance(std::span<const int>(a), std::span<const int>(b));
      const std::size_t want = testing::levenshtein(a, b);
      ++pairs;
      const bool ok =
          r.distance == want && r.distance == r.substitutions + r.insertions + r.deletions;
      if (!ok || pairs % 4096 == 0) c.expect(ok, "pair " + std::to_string(pairs));
    }
  }

  std::mt19937 rng(6);
  const auto& alphabet = testing::phone_alphabet();
  auto rand_string = [&] {
    SegmentString s;
    for (std::size_t i = 0, len = rng() % 10; i < len; ++i) {
      s.push_back(Segment::parse(alphabet[rng() % 5]));
    }
    return s;
  };
  for (int t = 0; t < 10000; ++t) {
    const auto a = rand_string(), b = rand_string(), x = rand_string();
    const std::size_t ab = edit_distance(a, b).distance;
    c.expect(ab == edit_distance(b, a).distance, "symmetry");
    c.expect((ab == 0) == (a == b), "identity of indiscernibles");
    c.expect(edit_distance(a, x).distance <= ab + edit_distance(b, x).distance,
             "triangle inequality");
  }
  return c.outcome(std::to_string(pairs) +
                   " exhaustive pairs agree; metric laws on 10000 random triples");
}

//===----------------------------------------------------------------------===//
// 7. CTC law
//===----------------------------------------------------------------------===//

Outcome ctc_law() {
  Checker c;
  const auto& alphabet = testing::phone_alphabet();
  const auto labels = PosteriorFrames::over(SymbolInventory(alphabet)).labels;
  std::mt19937 rng(7);
  for (int t = 0; t < 1000; ++t) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0, len = rng() % 15; i < len; ++i) {
      // Small range makes equal neighbours common.
      s.push_back(1 + rng() % (t % 2 ? 3 : alphabet.size()));
    }
    PosteriorFrames f;
    f.labels = labels;
    auto push = [&](std::size_t idx) {
      Distribution d(labels.size(), 0.0);
      d[idx] = 1.0;
      f.rows.push_back(std::move(d));
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i > 0 && s[i] == s[i - 1]) push(kBlankIndex);
      for (std::size_t k = 0, reps = 1 + rng() % 4; k < reps; ++k) push(s[i]);
    }
    SegmentString expect;
    for (std::size_t idx : s) expect.push_back(Segment::parse(labels[idx]));
    c.expect(ctc_greedy_decode(f) == expect, "string " + std::to_string(t));
  }
  return c.outcome("1000 expanded strings decode to themselves");
}

//===----------------------------------------------------------------------===//
// 8. search exactness
//===----------------------------------------------------------------------===//

Outcome search_exactness() {
  Checker c;
  const std::vector<std::string> alphabet = {"p", "pʰ", "i", "k", "s", "ŋ", "t͡ʃ"};
  const double norms[] = {0.0, 0.2, 0.34};
  std::mt19937 rng(8);
  std::size_t queries = 0;
  for (int corpus = 0; corpus < 200; ++corpus) {
    std::vector<PhoneDoc> docs;
    std::vector<std::vector<std::string>> doc_texts;
    for (std::size_t i = 0, n = rng() % 51; i < n; ++i) {
      PhoneDoc d{"d" + std::to_string(i), {}, std::nullopt};
      std::vector<std::string> t;
      for (std::size_t j = 0, len = 1 + rng() % 30; j < len; ++j) {
        t.push_back(alphabet[rng() % alphabet.size()]);
        d.phones.push_back(Segment::parse(t.back()));
      }
      docs.push_back(std::move(d));
      doc_texts.push_back(std::move(t));
    }
    const SearchIndex idx = index_build(docs);
    for (int qn = 0; qn < 3; ++qn, ++queries) {
      std::vector<std::string> q;
      if (!doc_texts.empty() && qn != 2) {
        const auto& src = doc_texts[rng() % doc_texts.size()];
        const std::size_t s = rng() % src.size();
        const std::size_t e = std::min(src.size(), s + 3 + rng() % 8);
        q.assign(src.begin() + static_cast<long>(s), src.begin() + static_cast<long>(e));
        if (qn == 1) q[rng() % q.size()] = alphabet[rng() % alphabet.size()];
      } else {
        for (std::size_t j = 0, len = 1 + rng() % 10; j < len; ++j) {
          q.push_back(alphabet[rng() % alphabet.size()]);
        }
      }
      SegmentString query;
      for (const auto& x : q) query.push_back(Segment::parse(x));

      // The brute-force scan does not depend on the threshold.
      std::vector<testing::BruteSpan> brute;
      for (const auto& t : doc_texts) brute.push_back(testing::brute_semi_global(q, t));
      for (double max_norm : norms) {
        const std::size_t max_edits = static_cast<std::size_t>(
            max_norm * static_cast<double>(q.size()) + 1e-9);
        std::vector<SearchHit> want;
        for (std::size_t i = 0; i < docs.size(); ++i) {
          if (brute[i].distance > max_edits) continue;
          want.push_back({docs[i].doc_id, brute[i].start, brute[i].end,
                          brute[i].distance,
                          static_cast<double>(brute[i].distance) /
                              static_cast<double>(q.size())});
        }
        std::sort(want.begin(), want.end(), [](const SearchHit& a, const SearchHit& b) {
          if (a.distance != b.distance) return a.distance < b.distance;
          return a.doc_id < b.doc_id;
        });
        c.expect(idx.search(query, docs.size() + 1, max_norm) == want,
                 "corpus " + std::to_string(corpus) + " max_norm " + str(max_norm));
      }
    }
  }
  return c.outcome("200 corpora, " + std::to_string(queries) +
                   " queries x max_norm {0, 0.2, 0.34} match brute force");
}

//===----------------------------------------------------------------------===//
// 9. tokenizer round trip
//===----------------------------------------------------------------------===//

Outcome tokenizer_round_trip() {
  Checker c;
  std::vector<std::string> corpus = {"pʰ", "t͡ʃ", "ŋ", "χ", "pʰik", "spik", "pʰiŋ",
                                     "piŋ", "t͡ʃaŋ", "d͡ʒiː"};
  const DbLoad loaded = load_db(kFixtureDir);
  for (const auto& lang : loaded.db.languages()) {
    for (const auto& e : lang.entries) {
      corpus.push_back(e.phone);
      corpus.push_back(e.phoneme);
    }
  }
  for (const auto& s : corpus) {
    const std::string n = normalize(s);
    c.expect(normalize(n) == n, "normalize idempotent on " + s);
    const SegmentString segs = tokenize(s);
    c.expect(join(segs) == n, "round trip " + s);
    c.expect(tokenize(join(segs)) == segs, "re-tokenize " + s);
    for (const auto& seg : segs) {
      c.expect(tokenize(seg.text()).size() == 1, "segment " + seg.text() + " is atomic");
    }
  }
  c.expect(tokenize("pʰ").size() == 1 && tokenize("t͡ʃ").size() == 1,
           "multi-codepoint segments stay whole");
  return c.outcome(std::to_string(corpus.size()) + " strings round-trip");
}

//===----------------------------------------------------------------------===//

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // <= 0: no limit
  std::function<Outcome()> run;
};

int main_impl() {
  const std::vector<Criterion> criteria = {
      {1, "fixture statistics", 1.0, fixture_statistics},
      {2, "upstream statistics", 5.0, upstream_statistics},
      {3, "PHOIBLE coverage", 0.0, phoible_coverage_check},
      {4, "allophone layer", 1.0, allophone_layer},
      {5, "simulation ordering", 10.0, simulation_ordering},
      {6, "edit-distance oracle", 30.0, edit_distance_oracle},
      {7, "CTC law", 5.0, ctc_law},
      {8, "search exactness", 60.0, search_exactness},
      {9, "tokenizer round trip", 1.0, tokenizer_round_trip},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.status == Status::Pass && cr.limit_seconds > 0 && secs > cr.limit_seconds) {
      o = {Status::Fail, "took " + str(secs) + " s, limit " + str(cr.limit_seconds) +
                             " s; " + o.detail};
    }
    const char* tag = o.status == Status::Pass   ? "[PASS]"
                      : o.status == Status::Fail ? "[FAIL]"
                                                 : "[SKIP]";
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << secs;
    std::cout << tag << ' ' << cr.id << ' ' << cr.name << " (" << time.str()
              << " s) " << o.detail << std::endl;
    if (o.status == Status::Fail) ++failed;
  }
  std::cout << (failed == 0 ? "acceptance: all run criteria passed"
                            : "acceptance: " + std::to_string(failed) +
                                  " criterion(s) failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace allokit::acceptance

int main() { return allokit::acceptance::main_impl(); }
