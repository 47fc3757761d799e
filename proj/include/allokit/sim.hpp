// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Synthetic-emission comparison of three recognizer output layers:
//
//   shared_phoneme   one phoneme label per phone for all languages, chosen
//                    by majority vote across the scenario's languages
//   private_phoneme  each language decodes in its own phoneme set
//   allophone        universal phone posteriors projected through the
//                    language's allophone matrix
//
// Emissions stand in for an acoustic encoder. The shared model only
// suffers from label collisions (a phone that means different phonemes in
// different languages); nothing here models training dynamics.

#ifndef ALLOKIT_SIM_HPP
#define ALLOKIT_SIM_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "allokit/allophone.hpp"
#include "allokit/allovera.hpp"
#include "allokit/decode.hpp"
#include "allokit/error.hpp"
#include "allokit/frames.hpp"
#include "allokit/ipa.hpp"

namespace allokit {

struct ScenarioUtterance {
  SegmentString phones;    // what was said
  SegmentString phonemes;  // reference transcription
};

struct ScenarioLanguage {
  std::string language;  // "iso" or "iso/g2p"
  std::vector<ScenarioUtterance> utterances;
};

struct Scenario {
  std::vector<ScenarioLanguage> languages;
  double noise = 0.0;
  std::size_t frames_per_segment = 3;
  std::uint64_t seed = 0;
  /// Fraction of the argmax margin used for per-frame jitter, in [0, 1).
  double jitter = 0.5;
};

inline constexpr std::string_view kSharedPhoneme = "shared_phoneme";
inline constexpr std::string_view kPrivatePhoneme = "private_phoneme";
inline constexpr std::string_view kAllophone = "allophone";

struct ModelResult {
  std::string model;
  std::vector<std::pair<std::string, ErrorRate>> per_language;
  ErrorRate overall;
};

/// Models in the order shared_phoneme, private_phoneme, allophone.
struct ScenarioReport {
  std::vector<ModelResult> models;

  const ModelResult& model(std::string_view name) const {
    for (const auto& m : models) {
      if (m.model == name) return m;
    }
    throw Error(Errc::BadArgument, "no model " + std::string(name));
  }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t utterance_seed(std::uint64_t seed, std::size_t lang,
                                    std::size_t utt) {
  return splitmix64(splitmix64(splitmix64(seed) ^ lang) ^ utt);
}

// [0, 1) from the top 53 bits; independent of the standard library's
// distribution implementations.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}


inline PosteriorFrames synthesize_columns(const std::vector<std::size_t>& columns,
                                          const SymbolInventory& inv,
                                          double noise,
                                          std::size_t frames_per_segment,
                                          std::uint64_t seed, double jitter) {
  if (!(noise >= 0.0 && noise < 1.0)) {
    throw Error(Errc::BadNoise, "noise must be in [0, 1), got " +
                                    std::to_string(noise));
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw Error(Errc::BadArgument, "jitter must be in [0, 1)");
  }
  if (frames_per_segment == 0) {
    throw Error(Errc::BadArgument, "frames_per_segment must be positive");
  }

  PosteriorFrames f = PosteriorFrames::over(inv);
  const std::size_t n = inv.symbols().size();
  const double other = n > 1 ? noise / static_cast<double>(n - 1) : 0.0;
  const double peak = n > 1 ? 1.0 - noise : 1.0;
  const double spread = jitter * std::max(0.0, peak - other);
  std::mt19937_64 rng(seed);

  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (k > 0) {
      Distribution blank(inv.dim(), 0.0);
      blank[kBlankIndex] = 1.0;
      f.rows.push_back(std::move(blank));
    }
    for (std::size_t r = 0; r < frames_per_segment; ++r) {
      Distribution row(inv.dim(), 0.0);
      double total = 0.0;
      for (std::size_t c = 1; c < inv.dim(); ++c) {
        row[c] = c == columns[k] ? peak : other + spread * unit_uniform(rng);
        total += row[c];
      }
      for (double& v : row) v /= total;
      f.rows.push_back(std::move(row));
    }
  }
  return f;
}

}  // namespace detail

/// Each truth segment emits `frames_per_segment` frames carrying 1 - noise
/// on the true symbol and noise spread evenly over the other symbols; a
/// pure-blank frame separates consecutive segments. Jitter adds up to
/// jitter * (true - other) to every other symbol before renormalizing, which
/// never overtakes the true symbol while true > other.
inline PosteriorFrames synthesize_emissions(const SegmentString& truth,
                                            const SymbolInventory& inv,
                                            double noise,
                                            std::size_t frames_per_segment,
                                            std::uint64_t seed,
                                            double jitter = 0.5) {
  std::vector<std::size_t> columns;
  columns.reserve(truth.size());
  for (const auto& seg : truth) {
    auto col = inv.index_of(seg.text());
    if (!col) throw Error(Errc::UnknownPhone, "[" + seg.text() + "]");
    columns.push_back(*col);
  }
  return detail::synthesize_columns(columns, inv, noise, frames_per_segment,
                                    seed, jitter);
}

namespace detail {

inline std::string private_label(const LanguageMapping& lang,
                                 std::string_view phone) {
  auto phonemes = lang.phonemes_of(phone);
  if (phonemes.empty()) {
    throw Error(Errc::UnknownPhone,
                "[" + std::string(phone) + "] is not a phone of " + lang.key().str());
  }
  return phonemes.front();
}

}  // namespace detail

/// One phoneme label per phone: every language that has the phone votes
/// for its own (canonically first) phoneme; ties go to the canonically
/// first label.
inline std::map<std::string, std::string> shared_phone_map(
    const std::vector<const LanguageMapping*>& languages) {
  std::map<std::string, std::map<std::string, std::size_t>> votes;
  for (const auto* lang : languages) {
    for (const auto& phone : lang->phones()) {
      ++votes[phone][detail::private_label(*lang, phone)];
    }
  }
  std::map<std::string, std::string> out;
  for (const auto& [phone, tally] : votes) {
    const std::string* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [label, count] : tally) {
      if (count > best_count) {
        best = &label;
        best_count = count;
      }
    }
    out.emplace(phone, *best);
  }
  return out;
}

inline ScenarioReport run_scenario(const Scenario& sc, const AlloDb& db) {
  const UniversalInventory inv = build_universal_inventory(db);

  std::vector<const LanguageMapping*> langs;
  std::vector<AllophoneMatrix> matrices;
  for (const auto& sl : sc.languages) {
    langs.push_back(&db.find(sl.language));
    matrices.push_back(build_allophone_matrix(*langs.back(), inv));
  }
  const auto shared_map = shared_phone_map(langs);
  std::vector<std::string> shared_labels;
  for (const auto& [phone, label] : shared_map) shared_labels.push_back(label);
  const SymbolInventory shared_inv(std::move(shared_labels));

  ScenarioReport report;
  for (std::string_view name : {kSharedPhoneme, kPrivatePhoneme, kAllophone}) {
    report.models.push_back({std::string(name), {}, {}});
  }
  ModelResult& shared = report.models[0];
  ModelResult& priv = report.models[1];
  ModelResult& allo = report.models[2];

  // Relabeled symbols may span several segments, so the private and shared
  // emissions are addressed by column rather than re-tokenized.
  auto columns_of = [](const SegmentString& phones, const SymbolInventory& axis,
                       auto&& label_of) {
    std::vector<std::size_t> cols;
    for (const auto& p : phones) cols.push_back(*axis.index_of(label_of(p.text())));
    return cols;
  };

  for (std::size_t li = 0; li < sc.languages.size(); ++li) {
    const ScenarioLanguage& sl = sc.languages[li];
    const LanguageMapping& lang = *langs[li];
    const AllophoneMatrix& matrix = matrices[li];
    ErrorRate shared_er, priv_er, allo_er;

    for (std::size_t ui = 0; ui < sl.utterances.size(); ++ui) {
      const ScenarioUtterance& u = sl.utterances[ui];
      for (const auto& ph : u.phonemes) {
        if (!matrix.phonemes().index_of(ph.text())) {
          throw Error(Errc::UnknownPhone, "reference phoneme /" + ph.text() +
                                              "/ is not in " + lang.key().str());
        }
      }
      const std::uint64_t seed = detail::utterance_seed(sc.seed, li, ui);

      PosteriorFrames phone_frames = synthesize_emissions(
          u.phones, inv, sc.noise, sc.frames_per_segment, seed, sc.jitter);
      SegmentString allo_hyp =
          ctc_greedy_decode(project_frames(phone_frames, matrix, Pooling::Max));

      auto priv_cols = columns_of(u.phones, matrix.phonemes(),
                                  [&](std::string_view p) {
                                    return detail::private_label(lang, p);
                                  });
      SegmentString priv_hyp = ctc_greedy_decode(detail::synthesize_columns(
          priv_cols, matrix.phonemes(), sc.noise, sc.frames_per_segment, seed,
          sc.jitter));

      auto shared_cols = columns_of(u.phones, shared_inv, [&](std::string_view p) {
        auto it = shared_map.find(std::string(p));
        if (it == shared_map.end()) {
          throw Error(Errc::UnknownPhone,
                      "[" + std::string(p) + "] is in no scenario language");
        }
        return it->second;
      });
      SegmentString shared_hyp = ctc_greedy_decode(detail::synthesize_columns(
          shared_cols, shared_inv, sc.noise, sc.frames_per_segment, seed,
          sc.jitter));

      const UtterancePair one[3] = {{u.phonemes, shared_hyp},
                                    {u.phonemes, priv_hyp},
                                    {u.phonemes, allo_hyp}};
      shared_er += corpus_per(std::span(one, 1));
      priv_er += corpus_per(std::span(one + 1, 1));
      allo_er += corpus_per(std::span(one + 2, 1));
    }
    shared.per_language.emplace_back(sl.language, shared_er);
    priv.per_language.emplace_back(sl.language, priv_er);
    allo.per_language.emplace_back(sl.language, allo_er);
    shared.overall += shared_er;
    priv.overall += priv_er;
    allo.overall += allo_er;
  }
  return report;
}

/// Scenario document (JSON):
///
///   {"noise": 0.0, "frames_per_segment": 3, "seed": 7, "jitter": 0.5,
///    "languages": [{"language": "eng",
///                   "utterances": [{"phones": "pʰ i k", "phonemes": "p i k"}]}]}
///
/// Only "languages" is required. Segment lists are space-separated.
inline Scenario parse_scenario(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  try {
    Scenario sc;
    sc.noise = doc.value("noise", sc.noise);
    sc.frames_per_segment = doc.value("frames_per_segment", sc.frames_per_segment);
    sc.seed = doc.value("seed", sc.seed);
    sc.jitter = doc.value("jitter", sc.jitter);
    for (const auto& jl : doc.at("languages")) {
      ScenarioLanguage sl;
      sl.language = jl.at("language").get<std::string>();
      for (const auto& ju : jl.at("utterances")) {
        sl.utterances.push_back(
            {parse_segments(ju.at("phones").get<std::string>()),
             parse_segments(ju.at("phonemes").get<std::string>())});
      }
      sc.languages.push_back(std::move(sl));
    }
    return sc;
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("scenario: ") + e.what());
  }
}

}  // namespace allokit

#endif  // ALLOKIT_SIM_HPP
