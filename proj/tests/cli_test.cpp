// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

#include "allokit/cli.hpp"

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "test_util.hpp"

namespace allokit {
namespace {

using testing::kDataDir;
using testing::kFixtureDir;
using testing::mapping_json;
using testing::TempDir;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

const std::string kFixtures = kFixtureDir.string();

TEST(Cli, NoSubcommandIsUsageError) {
  const auto r = run({});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("validate"), std::string::npos);
}

TEST(Cli, UnknownFlagOrSubcommand) {
  EXPECT_EQ(run({"stats", kFixtures, "--bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--output", "xml", "stats", kFixtures}).code, cli::kExitUsage);
  EXPECT_EQ(run({"stats", kFixtures, "inventory", kFixtures}).code, cli::kExitUsage);
}

TEST(Cli, Help) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("search"), std::string::npos);
}

TEST(Cli, StatsText) {
  const auto r = run({"stats", kFixtures});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("eng\teng-Latn\t4\t5"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("cmn\tcmn-Hans\t4\t4"), std::string::npos);
  EXPECT_NE(r.out.find("total\t-\t7\t7"), std::string::npos);
}

TEST(Cli, StatsJson) {
  const auto r = run({"--output", "json", "stats", kFixtures});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["total_phones"], 7);
  EXPECT_EQ(j["total_phoneme_symbols"], 7);
  EXPECT_EQ(j["languages"].size(), 3u);
}

TEST(Cli, DbFromFlagAndEnvironment) {
  EXPECT_EQ(run({"--db", kFixtures, "stats"}).code, 0);
  ::setenv("ALLOKIT_DB", kFixtures.c_str(), 1);
  const auto r = run({"inventory"});
  ::unsetenv("ALLOKIT_DB");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "i\nk\np\npʰ\ns\nŋ\nχ\n");
  EXPECT_EQ(run({"inventory"}).code, cli::kExitUsage);
}

TEST(Cli, ValidateGoodAndBad) {
  EXPECT_EQ(run({"validate", kFixtures}).code, 0);

  TempDir dir;
  dir.write("good.json", mapping_json("eng", {{"p", "p"}}));
  dir.write("bad.json",
            R"({"iso": "fra", "glottocode": ["stan1290"], "primary src": "X:1",
                "secondary srcs": [], "epitran": "fra-Latn",
                "mappings": [{"phone": "p"}]})");
  const auto r = run({"validate", dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.out.find("MissingField"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("/mappings/0/phoneme"), std::string::npos);

  const auto j = json_of(run({"--output", "json", "validate", dir.path().string()}));
  EXPECT_EQ(j["accepted"], nlohmann::json::array({"eng/eng-Latn"}));
  EXPECT_EQ(j["errors"][0]["code"], "MissingField");

  // Data commands refuse a database with rejected files.
  EXPECT_EQ(run({"stats", dir.path().string()}).code, cli::kExitInvalid);
}

TEST(Cli, MissingOrEmptyDirectory) {
  EXPECT_EQ(run({"stats", (kFixtureDir / "nope").string()}).code, cli::kExitInvalid);
  TempDir dir;
  const auto r = run({"validate", dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_NE(r.err.find("EmptyDb"), std::string::npos) << r.err;
}

TEST(Cli, Matrix) {
  const auto r = run({"matrix", kFixtures, "--lang", "eng"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "i\ti\nk\tk\np\tp,pʰ\ns\ts\n");
  EXPECT_EQ(run({"matrix", kFixtures, "--lang", "fra"}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"matrix", kFixtures}).code, cli::kExitUsage);
}

TEST(Cli, Phoible) {
  TempDir dir;
  const auto ranking = dir.write("rank.txt", "m\nk\ni\na\np\n").string();
  const auto r = run({"phoible", kFixtures, "--ranking", ranking, "--top", "1", "3", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "Top 1\t0\nTop 3\t2\nTop 5\t3\n");
  const auto bad = run({"phoible", kFixtures, "--ranking", ranking});  // 50 > 5
  EXPECT_EQ(bad.code, cli::kExitInvalid);
  EXPECT_NE(bad.err.find("BadN"), std::string::npos);
}

TEST(Cli, DecodeAndPer) {
  TempDir dir;
  const auto frames = dir.write("f.txt",
                                "<blank> i k p pʰ\n"
                                "0 0 0 0 1\n0 0 0 0 1\n1 0 0 0 0\n"
                                "0 1 0 0 0\n0 0 1 0 0\n")
                          .string();
  const auto d = run({"decode", "--frames", frames});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.out, "pʰ i k\n");

  const auto ref = dir.write("ref.txt", "p i k\np i\n").string();
  const auto hyp = dir.write("hyp.txt", "pʰ i k\np i\n").string();
  const auto p = run({"--output", "json", "per", "--ref", ref, "--hyp", hyp});
  ASSERT_EQ(p.code, 0) << p.err;
  const auto j = json_of(p);
  EXPECT_EQ(j["errors"], 1);
  EXPECT_EQ(j["ref_len"], 5);
  EXPECT_DOUBLE_EQ(j["per"].get<double>(), 0.2);

  const auto short_hyp = dir.write("short.txt", "p i k\n").string();
  EXPECT_EQ(run({"per", "--ref", ref, "--hyp", short_hyp}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"decode", "--frames", (dir.path() / "none").string()}).code,
            cli::kExitInvalid);
  const auto bad = dir.write("bad.txt", "<blank> a\n0.5 0.1\n").string();
  EXPECT_EQ(run({"decode", "--frames", bad}).code, cli::kExitInvalid);
}

TEST(Cli, Simulate) {
  const std::string scenario = (kDataDir / "fig1_scenario.json").string();
  const auto r = run({"--output", "json", "--db", kFixtures, "simulate",
                      "--scenario", scenario});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  ASSERT_EQ(j["models"].size(), 3u);
  EXPECT_EQ(j["models"][0]["model"], "shared_phoneme");
  EXPECT_GT(j["models"][0]["per"].get<double>(), 0.0);
  EXPECT_EQ(j["models"][1]["per"], 0.0);
  EXPECT_EQ(j["models"][2]["per"], 0.0);

  const auto text = run({"--db", kFixtures, "simulate", "--scenario", scenario});
  EXPECT_NE(text.out.find("allophone\t0.0000\t0.0000\t0.0000"), std::string::npos)
      << text.out;
}

TEST(Cli, JsonOutputIsByteIdentical) {
  const std::string scenario = (kDataDir / "fig1_scenario.json").string();
  const std::vector<std::string> args = {"--output", "json", "--seed", "7", "--db",
                                         kFixtures, "simulate", "--scenario",
                                         scenario};
  // Noise makes the seed matter.
  TempDir dir;
  auto text = detail::read_file(scenario);
  text.replace(text.find("\"noise\": 0.0"), 12, "\"noise\": 0.5");
  const auto noisy = dir.write("noisy.json", text).string();
  std::vector<std::string> noisy_args = args;
  noisy_args.back() = noisy;
  EXPECT_EQ(run(noisy_args).out, run(noisy_args).out);
  EXPECT_EQ(json_of(run(noisy_args))["seed"], 7);
  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"--output", "json", "stats", kFixtures},
           {"--output", "json", "inventory", kFixtures},
           {"--output", "json", "validate", kFixtures}}) {
    EXPECT_EQ(run(cmd).out, run(cmd).out);
  }
}

TEST(Cli, SearchCorpusAndSnapshot) {
  const std::string corpus = (kDataDir / "fig1_corpus.tsv").string();
  const auto r = run({"search", "--corpus", corpus, "--query", "p i k", "-k", "5",
                      "--max-norm", "0.34"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "speak\t1\t4\t0\t0.0000\n"
            "bing\t0\t2\t1\t0.3333\n"
            "peak\t0\t3\t1\t0.3333\n");

  TempDir dir;
  const auto snap = (dir.path() / "idx.json").string();
  EXPECT_EQ(run({"search", "--corpus", corpus, "--save-index", snap, "--query", "p"})
                .code,
            0);
  const auto again = run({"search", "--index", snap, "--query", "p i k", "-k", "5",
                          "--max-norm", "0.34"});
  EXPECT_EQ(again.out, r.out);

  EXPECT_EQ(run({"search", "--query", "p"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"search", "--corpus", corpus, "--index", snap, "--query", "p"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run({"search", "--corpus", corpus, "--query", ""}).code, cli::kExitInvalid);
  EXPECT_EQ(run({"search", "--corpus", corpus, "--query", "p", "-k", "0"}).code,
            cli::kExitUsage);
}

}  // namespace
}  // namespace allokit
