// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// The `allokit` command line. run() is the whole program; tools/allokit.cpp
// only forwards argv to it.
//
// Exit status: 0 success, 1 validation or data errors (report printed),
// 2 usage errors. With --output json every subcommand prints exactly one
// JSON document on stdout; text output is for people and may change.

#ifndef ALLOKIT_CLI_HPP
#define ALLOKIT_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "allokit/allophone.hpp"
#include "allokit/allovera.hpp"
#include "allokit/decode.hpp"
#include "allokit/error.hpp"
#include "allokit/frames.hpp"
#include "allokit/ipa.hpp"
#include "allokit/search.hpp"
#include "allokit/sim.hpp"

namespace allokit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

using ojson = nlohmann::ordered_json;

struct Options {
  std::string output = "text";
  std::optional<std::uint64_t> seed;
  std::string db;
  std::string dir;  // positional <dir> of the current subcommand

  std::string ranking;
  std::vector<std::size_t> top;
  std::string lang;
  std::string frames;
  std::string ref;
  std::string hyp;
  std::string scenario;
  std::string corpus;
  std::string index;
  std::string save_index;
  std::string query;
  std::size_t k = 5;
  double max_norm = 0.34;
  std::size_t ngram = 3;
};

// Raised for usage problems detected after parsing (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::filesystem::path db_dir(const Options& o) {
  if (!o.dir.empty()) return o.dir;
  if (!o.db.empty()) return o.db;
  if (const char* env = std::getenv("ALLOKIT_DB"); env != nullptr && *env) {
    return env;
  }
  throw UsageError("no database directory: pass <dir>, --db or set ALLOKIT_DB");
}

inline ojson issue_json(const ValidationIssue& i) {
  ojson j;
  j["file"] = i.file;
  j["path"] = i.path;
  j["code"] = i.code;
  j["message"] = i.message;
  return j;
}

inline void print_issues(std::ostream& os, const ValidationReport& r) {
  for (const auto& e : r.errors) {
    os << "error\t" << e.file << '\t' << e.path << '\t' << e.code << '\t'
       << e.message << '\n';
  }
  for (const auto& w : r.warnings) {
    os << "warning\t" << w.file << '\t' << w.path << '\t' << w.code << '\t'
       << w.message << '\n';
  }
}

// Loads the database; any rejected file aborts the command with exit 1.
inline std::optional<AlloDb> load_checked(const Options& o, std::ostream& out,
                                          std::ostream& err) {
  DbLoad loaded = load_db(db_dir(o));
  if (!loaded.report.ok()) {
    if (o.output == "json") {
      ojson j;
      j["status"] = "invalid";
      j["errors"] = ojson::array();
      for (const auto& e : loaded.report.errors) j["errors"].push_back(issue_json(e));
      out << j.dump(2) << '\n';
    }
    err << "database has invalid files:\n";
    print_issues(err, loaded.report);
    return std::nullopt;
  }
  return std::move(loaded.db);
}

inline std::string fixed(double v, int digits = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  DbLoad loaded = load_db(db_dir(o));
  if (o.output == "json") {
    ojson j;
    j["accepted"] = ojson::array();
    for (const auto& l : loaded.db.languages()) j["accepted"].push_back(l.key().str());
    j["errors"] = ojson::array();
    j["warnings"] = ojson::array();
    for (const auto& e : loaded.report.errors) j["errors"].push_back(issue_json(e));
    for (const auto& w : loaded.report.warnings) j["warnings"].push_back(issue_json(w));
    out << j.dump(2) << '\n';
  } else {
    print_issues(out, loaded.report);
    out << loaded.db.size() << " language(s) accepted, "
        << loaded.report.errors.size() << " error(s), "
        << loaded.report.warnings.size() << " warning(s)\n";
  }
  return loaded.report.ok() ? kExitOk : kExitInvalid;
}

inline int cmd_stats(const Options& o, std::ostream& out, std::ostream& err) {
  auto db = load_checked(o, out, err);
  if (!db) return kExitInvalid;
  const DbStats st = stats(*db);
  if (o.output == "json") {
    ojson j;
    j["languages"] = ojson::array();
    for (const auto& row : st.per_language) {
      ojson r;
      r["iso"] = row.key.iso;
      r["g2p"] = row.key.g2p;
      r["phonemes"] = row.phonemes;
      r["phones"] = row.phones;
      j["languages"].push_back(std::move(r));
    }
    j["total_phones"] = st.total_phones;
    j["total_phoneme_symbols"] = st.total_phoneme_symbols;
    out << j.dump(2) << '\n';
  } else {
    out << "iso\tg2p\tphonemes\tphones\n";
    for (const auto& row : st.per_language) {
      out << row.key.iso << '\t' << row.key.g2p << '\t' << row.phonemes << '\t'
          << row.phones << '\n';
    }
    out << "total\t-\t" << st.total_phoneme_symbols << '\t' << st.total_phones
        << '\n';
  }
  return kExitOk;
}

inline int cmd_phoible(const Options& o, std::ostream& out, std::ostream& err) {
  auto db = load_checked(o, out, err);
  if (!db) return kExitInvalid;
  const auto ranking =
      parse_phoible_ranking(allokit::detail::read_file(o.ranking));
  std::vector<std::size_t> tops = o.top;
  if (tops.empty()) tops = {50, 100, 200};
  ojson j = ojson::array();
  for (std::size_t n : tops) {
    const std::size_t c = phoible_coverage(*db, ranking, n);
    if (o.output == "json") {
      ojson r;
      r["top"] = n;
      r["intersection"] = c;
      j.push_back(std::move(r));
    } else {
      out << "Top " << n << '\t' << c << '\n';
    }
  }
  if (o.output == "json") out << j.dump(2) << '\n';
  return kExitOk;
}

inline int cmd_inventory(const Options& o, std::ostream& out, std::ostream& err) {
  auto db = load_checked(o, out, err);
  if (!db) return kExitInvalid;
  const UniversalInventory inv = build_universal_inventory(*db);
  if (o.output == "json") {
    ojson j;
    j["blank"] = kBlankSymbol;
    j["phones"] = inv.symbols();
    out << j.dump(2) << '\n';
  } else {
    for (const auto& p : inv.symbols()) out << p << '\n';
  }
  return kExitOk;
}

inline int cmd_matrix(const Options& o, std::ostream& out, std::ostream& err) {
  auto db = load_checked(o, out, err);
  if (!db) return kExitInvalid;
  const UniversalInventory inv = build_universal_inventory(*db);
  const AllophoneMatrix m = build_allophone_matrix(db->find(o.lang), inv);
  ojson j;
  j["language"] = m.language().str();
  j["rows"] = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<std::string> phones;
    for (std::size_t c : m.allophones(r)) phones.push_back(inv.symbols()[c]);
    if (o.output == "json") {
      ojson row;
      row["phoneme"] = m.phonemes().symbols()[r];
      row["phones"] = phones;
      j["rows"].push_back(std::move(row));
    } else {
      out << m.phonemes().symbols()[r] << '\t';
      for (std::size_t i = 0; i < phones.size(); ++i) {
        out << (i ? "," : "") << phones[i];
      }
      out << '\n';
    }
  }
  if (o.output == "json") out << j.dump(2) << '\n';
  return kExitOk;
}

inline int cmd_decode(const Options& o, std::ostream& out) {
  const PosteriorFrames f = parse_frames(allokit::detail::read_file(o.frames));
  const SegmentString segs = ctc_greedy_decode(f);
  if (o.output == "json") {
    ojson j;
    j["frames"] = f.size();
    std::vector<std::string> texts;
    for (const auto& s : segs) texts.push_back(s.text());
    j["segments"] = texts;
    out << j.dump(2) << '\n';
  } else {
    out << join(segs, " ") << '\n';
  }
  return kExitOk;
}

inline std::vector<SegmentString> read_utterances(const std::string& path) {
  std::istringstream in(allokit::detail::read_file(path));
  std::vector<SegmentString> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(parse_segments(line));
  return out;
}

inline int cmd_per(const Options& o, std::ostream& out) {
  const auto refs = read_utterances(o.ref);
  const auto hyps = read_utterances(o.hyp);
  if (refs.size() != hyps.size()) {
    throw Error(Errc::ParseError, "reference has " + std::to_string(refs.size()) +
                                      " lines, hypothesis has " +
                                      std::to_string(hyps.size()));
  }
  std::vector<UtterancePair> pairs;
  for (std::size_t i = 0; i < refs.size(); ++i) pairs.push_back({refs[i], hyps[i]});
  std::vector<EvalResult> each;
  const ErrorRate total = corpus_per(pairs, &each);
  if (o.output == "json") {
    ojson j;
    j["utterances"] = ojson::array();
    for (const auto& r : each) {
      ojson u;
      u["distance"] = r.distance;
      u["substitutions"] = r.substitutions;
      u["deletions"] = r.deletions;
      u["insertions"] = r.insertions;
      u["ref_len"] = r.ref_len;
      u["per"] = r.per();
      j["utterances"].push_back(std::move(u));
    }
    j["errors"] = total.errors;
    j["ref_len"] = total.ref_len;
    j["per"] = total.value();
    out << j.dump(2) << '\n';
  } else {
    out << "utt\tdist\tsub\tdel\tins\tref\tper\n";
    for (std::size_t i = 0; i < each.size(); ++i) {
      const auto& r = each[i];
      out << i + 1 << '\t' << r.distance << '\t' << r.substitutions << '\t'
          << r.deletions << '\t' << r.insertions << '\t' << r.ref_len << '\t'
          << fixed(r.per()) << '\n';
    }
    out << "total\t" << total.errors << "\t-\t-\t-\t" << total.ref_len << '\t'
        << fixed(total.value()) << '\n';
  }
  return kExitOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  auto db = load_checked(o, out, err);
  if (!db) return kExitInvalid;
  Scenario sc = parse_scenario(allokit::detail::read_file(o.scenario));
  if (o.seed) sc.seed = *o.seed;
  const ScenarioReport rep = run_scenario(sc, *db);
  if (o.output == "json") {
    ojson j;
    j["noise"] = sc.noise;
    j["frames_per_segment"] = sc.frames_per_segment;
    j["seed"] = sc.seed;
    j["models"] = ojson::array();
    for (const auto& m : rep.models) {
      ojson jm;
      jm["model"] = m.model;
      jm["languages"] = ojson::array();
      for (const auto& [lang, er] : m.per_language) {
        ojson jl;
        jl["language"] = lang;
        jl["errors"] = er.errors;
        jl["ref_len"] = er.ref_len;
        jl["per"] = er.value();
        jm["languages"].push_back(std::move(jl));
      }
      jm["errors"] = m.overall.errors;
      jm["ref_len"] = m.overall.ref_len;
      jm["per"] = m.overall.value();
      j["models"].push_back(std::move(jm));
    }
    out << j.dump(2) << '\n';
  } else {
    out << "model";
    for (const auto& [lang, er] : rep.models.front().per_language) out << '\t' << lang;
    out << "\toverall\n";
    for (const auto& m : rep.models) {
      out << m.model;
      for (const auto& [lang, er] : m.per_language) out << '\t' << fixed(er.value());
      out << '\t' << fixed(m.overall.value()) << '\n';
    }
  }
  return kExitOk;
}

inline int cmd_search(const Options& o, std::ostream& out) {
  if (o.corpus.empty() == o.index.empty()) {
    throw UsageError("search needs exactly one of --corpus or --index");
  }
  const SearchIndex idx =
      o.index.empty()
          ? index_build(parse_corpus(allokit::detail::read_file(o.corpus)), o.ngram)
          : SearchIndex::from_snapshot(allokit::detail::read_file(o.index));
  if (!o.save_index.empty()) {
    std::ofstream f(o.save_index, std::ios::binary);
    f << idx.snapshot();
    if (!f) throw Error(Errc::IoError, "cannot write " + o.save_index);
  }
  const SegmentString q = parse_segments(o.query);
  const auto hits = search(idx, q, o.k, o.max_norm);
  if (o.output == "json") {
    ojson j;
    j["query"] = join(q, " ");
    j["hits"] = ojson::array();
    for (const auto& h : hits) {
      ojson jh;
      jh["doc_id"] = h.doc_id;
      jh["start"] = h.start;
      jh["end"] = h.end;
      jh["distance"] = h.distance;
      jh["normalized"] = h.normalized;
      j["hits"].push_back(std::move(jh));
    }
    out << j.dump(2) << '\n';
  } else {
    for (const auto& h : hits) {
      out << h.doc_id << '\t' << h.start << '\t' << h.end << '\t' << h.distance
          << '\t' << fixed(h.normalized) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  using detail::Options;
  Options o;
  CLI::App app{"allokit: phoneme/allophone mapping toolkit", "allokit"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--db", o.db, "Database directory (default: $ALLOKIT_DB)");
  app.add_option("--output", o.output, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", o.seed, "Override the scenario seed");

  auto add_dir = [&](CLI::App* sub) {
    sub->add_option("dir", o.dir, "Directory of mapping files");
  };

  auto* validate = app.add_subcommand("validate", "Validate mapping files");
  add_dir(validate);
  auto* stats_cmd = app.add_subcommand("stats", "Phoneme/phone counts");
  add_dir(stats_cmd);
  auto* phoible = app.add_subcommand("phoible", "Coverage of top PHOIBLE phones");
  add_dir(phoible);
  phoible->add_option("--ranking", o.ranking, "Ranked phone list")->required();
  phoible->add_option("--top", o.top, "Prefix sizes (default 50 100 200)");
  auto* inventory = app.add_subcommand("inventory", "Universal phone inventory");
  add_dir(inventory);
  auto* matrix = app.add_subcommand("matrix", "Allophone matrix of a language");
  add_dir(matrix);
  matrix->add_option("--lang", o.lang, "iso or iso/g2p")->required();
  auto* decode = app.add_subcommand("decode", "Greedy CTC decoding of frames");
  decode->add_option("--frames", o.frames, "Frames file")->required();
  auto* per = app.add_subcommand("per", "Phoneme error rate");
  per->add_option("--ref", o.ref, "Reference file")->required();
  per->add_option("--hyp", o.hyp, "Hypothesis file")->required();
  auto* simulate = app.add_subcommand("simulate", "Compare output layers");
  simulate->add_option("--scenario", o.scenario, "Scenario file")->required();
  auto* search_cmd = app.add_subcommand("search", "Approximate phonetic search");
  search_cmd->add_option("--corpus", o.corpus, "Corpus file");
  search_cmd->add_option("--index", o.index, "Index snapshot");
  search_cmd->add_option("--save-index", o.save_index, "Write an index snapshot");
  search_cmd->add_option("--query", o.query, "Query segments")->required();
  search_cmd->add_option("-k", o.k, "Maximum hits")->check(CLI::PositiveNumber);
  search_cmd->add_option("--max-norm", o.max_norm, "Maximum distance / |query|")
      ->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--ngram", o.ngram, "Index n-gram size")
      ->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  argv.push_back("allokit");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return detail::cmd_validate(o, out);
    if (stats_cmd->parsed()) return detail::cmd_stats(o, out, err);
    if (phoible->parsed()) return detail::cmd_phoible(o, out, err);
    if (inventory->parsed()) return detail::cmd_inventory(o, out, err);
    if (matrix->parsed()) return detail::cmd_matrix(o, out, err);
    if (decode->parsed()) return detail::cmd_decode(o, out);
    if (per->parsed()) return detail::cmd_per(o, out);
    if (simulate->parsed()) return detail::cmd_simulate(o, out, err);
    if (search_cmd->parsed()) return detail::cmd_search(o, out);
  } catch (const detail::UsageError& e) {
    err << "allokit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "allokit: " << e.what() << '\n';
    return kExitInvalid;
  }
  err << app.help();
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace allokit::cli

#endif  // ALLOKIT_CLI_HPP
