// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// Phoneme/allophone mapping files: loading, validation, canonical writing
// and database statistics.
//
// A mapping file is a JSON object:
//
//   {
//     "iso": "spa",
//     "glottocode": ["amer1254", "cast1244"],
//     "primary src": "Martinez-Celdran-et-al:2003-illustration",
//     "secondary srcs": ["Wiki:2019-spanish-language"],
//     "epitran": "spa-Latn",
//     "mappings": [
//       {"phone": "χ", "phoneme": "x",
//        "environment": "optionally, before a back vowel",
//        "glottocodes": ["cast1244"]}
//     ]
//   }
//
// The G2P engine is named by exactly one of the keys "epitran" or "g2p".
// Error and warning locations are JSON pointers into the document.

#ifndef ALLOKIT_ALLOVERA_HPP
#define ALLOKIT_ALLOVERA_HPP

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "allokit/error.hpp"
#include "allokit/ipa.hpp"

namespace allokit {

struct AlloEntry {
  std::string phone;    // normalized
  std::string phoneme;  // normalized
  SegmentString phone_segments;
  SegmentString phoneme_segments;
  std::optional<std::string> environment;
  std::optional<std::string> source;
  std::optional<std::vector<std::string>> glottocodes;
  std::optional<std::string> notes;

  friend bool operator==(const AlloEntry&, const AlloEntry&) = default;
};

struct LanguageKey {
  std::string iso;
  std::string g2p;

  std::string str() const { return iso + "/" + g2p; }
  friend bool operator==(const LanguageKey&, const LanguageKey&) = default;
  friend auto operator<=>(const LanguageKey&, const LanguageKey&) = default;
};

struct LanguageMapping {
  std::string iso;
  std::vector<std::string> glottocodes;
  std::string primary_src;
  std::vector<std::string> secondary_srcs;
  std::string g2p_engine;  // "epitran" or "g2p"
  std::string g2p;         // e.g. "spa-Latn"
  std::vector<AlloEntry> entries;

  LanguageKey key() const { return {iso, g2p}; }

  std::set<std::string> phones() const {
    std::set<std::string> s;
    for (const auto& e : entries) s.insert(e.phone);
    return s;
  }

  std::set<std::string> phonemes() const {
    std::set<std::string> s;
    for (const auto& e : entries) s.insert(e.phoneme);
    return s;
  }

  /// Phonemes realized by `phone`, in canonical (codepoint) order.
  std::vector<std::string> phonemes_of(std::string_view phone) const {
    std::set<std::string> s;
    for (const auto& e : entries) {
      if (e.phone == phone) s.insert(e.phoneme);
    }
    return {s.begin(), s.end()};
  }

  friend bool operator==(const LanguageMapping&,
                         const LanguageMapping&) = default;
};

struct ValidationIssue {
  std::string file;
  std::string path;
  std::string code;
  std::string message;

  friend bool operator==(const ValidationIssue&,
                         const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const noexcept { return errors.empty(); }

  bool has_error(std::string_view code) const {
    return std::any_of(errors.begin(), errors.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
  }

  void merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(),
                    other.warnings.end());
  }
};

/// mapping is set iff report.ok().
struct LoadResult {
  std::optional<LanguageMapping> mapping;
  ValidationReport report;
};

/// Languages sorted by key; keys are unique.
class AlloDb {
 public:
  AlloDb() = default;

  void add(LanguageMapping lang) {
    auto pos = std::lower_bound(
        languages_.begin(), languages_.end(), lang.key(),
        [](const LanguageMapping& l, const LanguageKey& k) { return l.key() < k; });
    if (pos != languages_.end() && pos->key() == lang.key()) {
      throw Error(Errc::DuplicateLanguageKey, lang.key().str());
    }
    languages_.insert(pos, std::move(lang));
  }

  const std::vector<LanguageMapping>& languages() const noexcept {
    return languages_;
  }
  bool empty() const noexcept { return languages_.empty(); }
  std::size_t size() const noexcept { return languages_.size(); }

  /// Looks a language up by "iso" or "iso/g2p". A bare ISO code must be
  /// unambiguous.
  const LanguageMapping& find(std::string_view name) const {
    const LanguageMapping* hit = nullptr;
    for (const auto& l : languages_) {
      if (l.key().str() == name) return l;
      if (l.iso == name) {
        if (hit != nullptr) {
          throw Error(Errc::UnknownLanguage,
                      "'" + std::string(name) +
                          "' is ambiguous; use iso/g2p");
        }
        hit = &l;
      }
    }
    if (hit == nullptr) {
      throw Error(Errc::UnknownLanguage, "'" + std::string(name) + "'");
    }
    return *hit;
  }

 private:
  std::vector<LanguageMapping> languages_;
};

struct DbLoad {
  AlloDb db;
  ValidationReport report;
};

namespace detail {

inline bool is_iso639_3(std::string_view s) {
  return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char c) {
           return c >= 'a' && c <= 'z';
         });
}

inline bool is_glottocode(std::string_view s) {
  if (s.size() != 8) return false;
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] < 'a' || s[i] > 'z') return false;
  }
  for (std::size_t i = 4; i < 8; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

inline bool is_citation_key(std::string_view s) {
  static const std::regex re(R"([A-Za-z0-9][A-Za-z0-9_:.+/\-]*)");
  return std::regex_match(s.begin(), s.end(), re);
}

class ReportBuilder {
 public:
  explicit ReportBuilder(std::string file) : file_(std::move(file)) {}

  void error(std::string path, std::string code, std::string message) {
    report_.errors.push_back(
        {file_, std::move(path), std::move(code), std::move(message)});
  }
  void warning(std::string path, std::string code, std::string message) {
    report_.warnings.push_back(
        {file_, std::move(path), std::move(code), std::move(message)});
  }
  ValidationReport take() { return std::move(report_); }

 private:
  std::string file_;
  ValidationReport report_;
};

inline const std::set<std::string>& known_top_level_keys() {
  static const std::set<std::string> keys = {
      "iso", "glottocode", "primary src", "secondary srcs",
      "epitran", "g2p", "mappings"};
  return keys;
}

inline const std::set<std::string>& known_entry_keys() {
  static const std::set<std::string> keys = {
      "phone", "phoneme", "environment", "source", "glottocodes", "notes"};
  return keys;
}

}  // namespace detail

/// Parses and validates one mapping document. `file` only labels issues.
/// `bib_keys`, when given, turns unknown citation keys into warnings.
inline LoadResult load_language(std::string_view document,
                                const std::string& file = "<input>",
                                const std::set<std::string>* bib_keys = nullptr) {
  using nlohmann::json;
  detail::ReportBuilder rb(file);
  LoadResult result;

  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    rb.error("", "ParseError", e.what());
    result.report = rb.take();
    return result;
  }
  if (!doc.is_object()) {
    rb.error("", "ParseError", "top level is not a JSON object");
    result.report = rb.take();
    return result;
  }

  LanguageMapping lang;

  auto required_string = [&](const char* key, std::string& out) -> bool {
    const std::string path = std::string("/") + key;
    auto it = doc.find(key);
    if (it == doc.end()) {
      rb.error(path, "MissingField", std::string("missing \"") + key + "\"");
      return false;
    }
    if (!it->is_string()) {
      rb.error(path, "BadType", std::string("\"") + key + "\" must be a string");
      return false;
    }
    out = it->get<std::string>();
    return true;
  };
  auto string_array = [&](const json& arr, const std::string& path,
                          std::vector<std::string>& out) -> bool {
    if (!arr.is_array()) {
      rb.error(path, "BadType", "expected an array of strings");
      return false;
    }
    bool ok = true;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_string()) {
        rb.error(path + "/" + std::to_string(i), "BadType", "expected a string");
        ok = false;
      } else {
        out.push_back(arr[i].get<std::string>());
      }
    }
    return ok;
  };
  auto check_citation = [&](const std::string& key, const std::string& path) {
    if (!detail::is_citation_key(key)) {
      rb.warning(path, "BadCitationKey", "'" + key + "' is not a cite key");
    } else if (bib_keys != nullptr && bib_keys->count(key) == 0) {
      rb.warning(path, "UnknownCitation",
                 "'" + key + "' not found in the bibliography");
    }
  };

  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (detail::known_top_level_keys().count(it.key()) == 0) {
      rb.warning("/" + it.key(), "UnknownField",
                 "unrecognized key \"" + it.key() + "\"");
    }
  }

  if (required_string("iso", lang.iso) && !detail::is_iso639_3(lang.iso)) {
    rb.error("/iso", "BadIso",
             "'" + lang.iso + "' is not three lowercase letters");
  }

  std::set<std::string> global_glottocodes;
  if (auto it = doc.find("glottocode"); it == doc.end()) {
    rb.error("/glottocode", "MissingField", "missing \"glottocode\"");
  } else if (string_array(*it, "/glottocode", lang.glottocodes)) {
    if (lang.glottocodes.empty()) {
      rb.error("/glottocode", "BadGlottocode", "no glottocodes listed");
    }
    for (std::size_t i = 0; i < lang.glottocodes.size(); ++i) {
      const auto& g = lang.glottocodes[i];
      if (!detail::is_glottocode(g)) {
        rb.error("/glottocode/" + std::to_string(i), "BadGlottocode",
                 "'" + g + "' is not 4 letters + 4 digits");
      }
      global_glottocodes.insert(g);
    }
  }

  if (required_string("primary src", lang.primary_src)) {
    check_citation(lang.primary_src, "/primary src");
  }
  if (auto it = doc.find("secondary srcs"); it == doc.end()) {
    rb.warning("/secondary srcs", "MissingField",
               "missing \"secondary srcs\"; assuming none");
  } else if (string_array(*it, "/secondary srcs", lang.secondary_srcs)) {
    for (std::size_t i = 0; i < lang.secondary_srcs.size(); ++i) {
      check_citation(lang.secondary_srcs[i],
                     "/secondary srcs/" + std::to_string(i));
    }
  }

  const bool has_epitran = doc.contains("epitran");
  const bool has_g2p = doc.contains("g2p");
  if (has_epitran && has_g2p) {
    rb.error("/g2p", "MultipleG2p",
             "both \"epitran\" and \"g2p\" are present; exactly one allowed");
  } else if (!has_epitran && !has_g2p) {
    rb.error("/epitran", "MissingField",
             "missing G2P identifier (\"epitran\" or \"g2p\")");
  } else {
    lang.g2p_engine = has_epitran ? "epitran" : "g2p";
    if (required_string(lang.g2p_engine.c_str(), lang.g2p) && lang.g2p.empty()) {
      rb.error("/" + lang.g2p_engine, "MissingField", "empty G2P identifier");
    }
  }

  auto mit = doc.find("mappings");
  if (mit == doc.end()) {
    rb.error("/mappings", "MissingField", "missing \"mappings\"");
  } else if (!mit->is_array()) {
    rb.error("/mappings", "BadType", "\"mappings\" must be an array");
  } else if (mit->empty()) {
    rb.error("/mappings", "EmptyMappings", "no mappings");
  } else {
    for (std::size_t i = 0; i < mit->size(); ++i) {
      const json& m = (*mit)[i];
      const std::string base = "/mappings/" + std::to_string(i);
      if (!m.is_object()) {
        rb.error(base, "BadType", "mapping must be an object");
        continue;
      }
      for (auto kit = m.begin(); kit != m.end(); ++kit) {
        if (detail::known_entry_keys().count(kit.key()) == 0) {
          rb.warning(base + "/" + kit.key(), "UnknownField",
                     "unrecognized key \"" + kit.key() + "\"");
        }
      }
      AlloEntry entry;
      bool ok = true;
      auto symbol = [&](const char* key, std::string& text,
                        SegmentString& segs) {
        const std::string path = base + "/" + key;
        auto it = m.find(key);
        if (it == m.end()) {
          rb.error(path, "MissingField", std::string("missing \"") + key + "\"");
          ok = false;
          return;
        }
        if (!it->is_string()) {
          rb.error(path, "BadType", std::string("\"") + key + "\" must be a string");
          ok = false;
          return;
        }
        const auto raw = it->get<std::string>();
        try {
          TokenizeDiagnostics diag;
          segs = tokenize(raw, &diag);
          for (auto& w : diag.warnings) rb.warning(path, "UnknownDiacritic", w);
          if (segs.empty()) {
            rb.error(path, "UntokenizableSymbol", "empty symbol");
            ok = false;
            return;
          }
          text = normalize(raw);
        } catch (const Error& e) {
          rb.error(path, "UntokenizableSymbol", e.what());
          ok = false;
        }
      };
      symbol("phone", entry.phone, entry.phone_segments);
      symbol("phoneme", entry.phoneme, entry.phoneme_segments);

      auto optional_text = [&](const char* key, std::optional<std::string>& out) {
        auto it = m.find(key);
        if (it == m.end()) return;
        if (!it->is_string()) {
          rb.error(base + "/" + key, "BadType",
                   std::string("\"") + key + "\" must be a string");
          ok = false;
          return;
        }
        out = it->get<std::string>();
      };
      optional_text("environment", entry.environment);
      optional_text("source", entry.source);
      optional_text("notes", entry.notes);
      if (entry.source) check_citation(*entry.source, base + "/source");

      if (auto git = m.find("glottocodes"); git != m.end()) {
        std::vector<std::string> codes;
        const std::string gpath = base + "/glottocodes";
        if (!string_array(*git, gpath, codes)) {
          ok = false;
        } else if (codes.empty()) {
          rb.error(gpath, "BadGlottocode", "empty glottocode subset");
          ok = false;
        } else {
          for (std::size_t j = 0; j < codes.size(); ++j) {
            const std::string cpath = gpath + "/" + std::to_string(j);
            if (!detail::is_glottocode(codes[j])) {
              rb.error(cpath, "BadGlottocode",
                       "'" + codes[j] + "' is not 4 letters + 4 digits");
              ok = false;
            } else if (global_glottocodes.count(codes[j]) == 0) {
              rb.error(cpath, "UnknownGlottocodeSubset",
                       "'" + codes[j] + "' is not in the file's glottocode list");
              ok = false;
            }
          }
          entry.glottocodes = std::move(codes);
        }
      }
      if (ok) lang.entries.push_back(std::move(entry));
    }
  }

  result.report = rb.take();
  if (result.report.ok()) result.mapping = std::move(lang);
  return result;
}

/// Canonical writer. Keys are emitted in a fixed order; symbols are written
/// in normalized form, so load_language(serialize(m)) reproduces m.
inline std::string serialize(const LanguageMapping& lang) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  doc["iso"] = lang.iso;
  doc["glottocode"] = lang.glottocodes;
  doc["primary src"] = lang.primary_src;
  doc["secondary srcs"] = lang.secondary_srcs;
  doc[lang.g2p_engine.empty() ? "epitran" : lang.g2p_engine] = lang.g2p;
  ojson mappings = ojson::array();
  for (const auto& e : lang.entries) {
    ojson m;
    m["phone"] = e.phone;
    m["phoneme"] = e.phoneme;
    if (e.environment) m["environment"] = *e.environment;
    if (e.source) m["source"] = *e.source;
    if (e.glottocodes) m["glottocodes"] = *e.glottocodes;
    if (e.notes) m["notes"] = *e.notes;
    mappings.push_back(std::move(m));
  }
  doc["mappings"] = std::move(mappings);
  return doc.dump(4) + "\n";
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Cite keys from "@type{key," headers.
inline std::set<std::string> bibtex_keys(std::string_view text) {
  static const std::regex re(R"(@\s*[A-Za-z]+\s*\{\s*([^,\s]+)\s*,)");
  std::set<std::string> keys;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), re);
       it != std::sregex_iterator(); ++it) {
    keys.insert((*it)[1].str());
  }
  return keys;
}

}  // namespace detail

/// Loads every *.json mapping in `dir`. Rejected files are reported and left
/// out of the database; a second file with an already-seen key is rejected
/// with DuplicateLanguageKey. Any *.bib files in `dir` are used to
/// cross-check citation keys.
inline DbLoad load_db(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(Errc::IoError, dir.string() + " is not a directory");
  }
  std::vector<fs::path> json_files;
  std::vector<fs::path> bib_files;
  for (const auto& ent : fs::directory_iterator(dir)) {
    if (!ent.is_regular_file()) continue;
    const auto ext = ent.path().extension().string();
    if (ext == ".json") json_files.push_back(ent.path());
    if (ext == ".bib") bib_files.push_back(ent.path());
  }
  if (json_files.empty()) {
    throw Error(Errc::EmptyDb, "no *.json mapping files in " + dir.string());
  }
  std::sort(json_files.begin(), json_files.end());

  std::optional<std::set<std::string>> bib;
  for (const auto& b : bib_files) {
    if (!bib) bib.emplace();
    bib->merge(detail::bibtex_keys(detail::read_file(b)));
  }

  DbLoad out;
  std::map<LanguageKey, std::string> seen;
  for (const auto& f : json_files) {
    const std::string name = f.filename().string();
    LoadResult r = load_language(detail::read_file(f), name,
                                 bib ? &*bib : nullptr);
    out.report.merge(r.report);
    if (!r.mapping) continue;
    const LanguageKey key = r.mapping->key();
    if (auto it = seen.find(key); it != seen.end()) {
      out.report.errors.push_back({name, "", "DuplicateLanguageKey",
                                   key.str() + " already defined by " +
                                       it->second});
      continue;
    }
    seen.emplace(key, name);
    out.db.add(std::move(*r.mapping));
  }
  return out;
}

struct LanguageStats {
  LanguageKey key;
  std::size_t phonemes = 0;
  std::size_t phones = 0;
};

struct DbStats {
  std::vector<LanguageStats> per_language;
  std::size_t total_phones = 0;
  std::size_t total_phoneme_symbols = 0;
};

/// Distinct normalized phone strings across the database.
inline std::set<std::string> phone_set(const AlloDb& db) {
  std::set<std::string> s;
  for (const auto& l : db.languages()) s.merge(l.phones());
  return s;
}

inline std::set<std::string> phoneme_set(const AlloDb& db) {
  std::set<std::string> s;
  for (const auto& l : db.languages()) s.merge(l.phonemes());
  return s;
}

inline DbStats stats(const AlloDb& db) {
  DbStats st;
  for (const auto& l : db.languages()) {
    st.per_language.push_back({l.key(), l.phonemes().size(), l.phones().size()});
  }
  st.total_phones = phone_set(db).size();
  st.total_phoneme_symbols = phoneme_set(db).size();
  return st;
}

/// |first n of ranked_phones ∩ phones of db|, both sides normalized.
inline std::size_t phoible_coverage(const AlloDb& db,
                                    const std::vector<std::string>& ranked_phones,
                                    std::size_t n) {
  if (n > ranked_phones.size()) {
    throw Error(Errc::BadN, "n = " + std::to_string(n) + " exceeds ranking of " +
                                std::to_string(ranked_phones.size()));
  }
  const auto phones = phone_set(db);
  std::set<std::string> top;
  for (std::size_t i = 0; i < n; ++i) top.insert(normalize(ranked_phones[i]));
  return static_cast<std::size_t>(std::count_if(
      top.begin(), top.end(), [&](const std::string& p) { return phones.count(p) > 0; }));
}

/// One phone per line in descending frequency order. Only the first
/// tab-separated field is used; blank lines and '#' comments are skipped.
inline std::vector<std::string> parse_phoible_ranking(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    out.push_back(line.substr(0, line.find('\t')));
  }
  return out;
}

}  // namespace allokit

#endif  // ALLOKIT_ALLOVERA_HPP
