// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.h"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "simulst/bleu.h"
#include "simulst/features.h"
#include "testing.h"

namespace simulst::cli {
namespace {

namespace fs = std::filesystem;
using testing::DataPath;
using testing::ReadFile;
using testing::TempDir;

struct Run {
  int code;
  std::string out, err;
};

Run Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "simulst");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void Write(const fs::path &p, const std::string &text) { std::ofstream(p) << text; }

const std::string kCorpus = DataPath("golden/corpus.tsv").string();
const std::string kModel = "toy:" + DataPath("golden/scripts").string();

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"frobnicate"}).code, 1);
  EXPECT_EQ(Cli({"filter"}).code, 1);
  EXPECT_EQ(Cli({"--log-level", "loud", "bleu", "--hyp", "a", "--ref", "b"}).code, 1);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST(Cli, Version) {
  const auto r = Cli({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(kBleuSignature), std::string::npos);
}

TEST(Cli, MissingInputIsDataError) {
  TempDir tmp;
  const auto r = Cli({"filter", "--manifest", (tmp / "missing.tsv").string(), "--out",
                      (tmp / "k.tsv").string(), "--report", (tmp / "r.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, FilterReproducesGoldenReport) {
  TempDir tmp;
  const auto r = Cli({"filter", "--manifest", DataPath("filter/toy_manifest.tsv").string(),
                      "--out", (tmp / "kept.tsv").string(), "--report",
                      (tmp / "report.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(ReadFile(tmp / "report.json")),
            nlohmann::json::parse(ReadFile(DataPath("filter/golden_report.json"))));
  std::istringstream kept(ReadFile(tmp / "kept.tsv"));
  std::istringstream ids(ReadFile(DataPath("filter/golden_kept_ids.txt")));
  std::string line, id;
  std::getline(kept, line);  // header
  std::size_t n = 0;
  while (std::getline(kept, line)) {
    ASSERT_TRUE(std::getline(ids, id));
    EXPECT_EQ(line.substr(0, line.find('\t')), id);
    ++n;
  }
  EXPECT_EQ(n, 79u);
}

TEST(Cli, OutputDirResolvesRelativePaths) {
  TempDir tmp;
  const auto r = Cli({"--output-dir", tmp.Path().string(), "filter", "--manifest",
                      DataPath("filter/toy_manifest.tsv").string(), "--out", "sub/kept.tsv",
                      "--report", "sub/report.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(tmp / "sub/kept.tsv"));
  EXPECT_TRUE(fs::exists(tmp / "sub/report.json"));
}

TEST(Cli, SimulateWritesGoldenTraces) {
  for (double seg : testing::GoldenSegments()) {
    for (std::size_t k : testing::GoldenKs()) {
      TempDir tmp;
      const auto r = Cli({"simulate", "--corpus", kCorpus, "--model", kModel, "--clock", "fake",
                          "--segment-ms", std::to_string(static_cast<int>(seg)), "--k",
                          std::to_string(k), "--trace-out", tmp.Path().string()});
      ASSERT_EQ(r.code, 0) << r.err;
      for (const auto &s : testing::GoldenScripts()) {
        EXPECT_EQ(ReadFile(tmp / (s.id + ".json")),
                  ReadFile(testing::GoldenTracePath(s.id, seg, k)))
            << s.id << " seg " << seg << " k " << k;
      }
    }
  }
}

TEST(Cli, SimulateRejectsBadModelSpec) {
  TempDir tmp;
  const auto r = Cli({"simulate", "--corpus", kCorpus, "--model", "onnx:x", "--trace-out",
                      tmp.Path().string()});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, SweepWritesFullCurve) {
  TempDir tmp;
  const auto r = Cli({"sweep", "--corpus", kCorpus, "--model", kModel, "--clock", "fake",
                      "--curve-out", (tmp / "curve.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = ReadFile(tmp / "curve.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 29);
  EXPECT_EQ(csv, r.out);
  EXPECT_EQ(Cli({"sweep", "--corpus", kCorpus, "--model", kModel, "--k-range", "3:1",
                 "--curve-out", (tmp / "c.csv").string()})
                .code,
            1);
}

TEST(Cli, EvaluateScoresGoldenTraces) {
  TempDir tmp;
  for (const auto &s : testing::GoldenScripts()) {
    fs::copy_file(testing::GoldenTracePath(s.id, 320, 3), tmp / (s.id + ".json"));
  }
  const auto r = Cli({"evaluate", "--traces", tmp.Path().string(), "--refs", kCorpus, "--out",
                      (tmp / "eval.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(ReadFile(tmp / "eval.json"));
  EXPECT_EQ(j["utterances"].size(), 3u);
  EXPECT_EQ(j["bleu"]["score"].get<double>(), 100.0);
  EXPECT_EQ(j["al_ms"].get<double>(), j["al_ca_ms"].get<double>());
}

TEST(Cli, BleuLine) {
  TempDir tmp;
  Write(tmp / "h.txt", "a b c d\n");
  Write(tmp / "r.txt", "a b c d e\n");
  const auto r = Cli({"bleu", "--hyp", (tmp / "h.txt").string(), "--ref",
                      (tmp / "r.txt").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind(std::string(kBleuSignature) + " = 77.88", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("hyp_len = 4 ref_len = 5"), std::string::npos);
  Write(tmp / "r2.txt", "a\nb\n");
  EXPECT_EQ(Cli({"bleu", "--hyp", (tmp / "h.txt").string(), "--ref",
                 (tmp / "r2.txt").string()})
                .code,
            2);
}

TEST(Cli, CtcReportsGreedyOutputAndCompression) {
  TempDir tmp;
  const auto post = testing::PosteriorFromWeights(
      {{1, 9, 1}, {1, 9, 1}, {9, 1, 1}, {1, 1, 9}, {1, 1, 9}, {1, 9, 1}});
  WriteFeatureMatrix(post.LogProbs(), tmp / "post.fbnk");
  const auto r = Cli({"ctc", "--posterior", (tmp / "post.fbnk").string(), "--max-input-len",
                      "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["frames"], 6);
  EXPECT_EQ(j["greedy_labels"], (std::vector<int>{1, 1, 0, 2, 2, 1}));
  EXPECT_EQ(j["collapsed"], (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(j["compression"]["ctc_groups"], 4);
  EXPECT_EQ(j["compression"]["group_sizes"], (std::vector<int>{2, 1, 2, 1}));
  EXPECT_EQ(j["compression"]["fixed_groups"], 2);
  EXPECT_EQ(j["compression"]["merge_factor"], 4);
  EXPECT_EQ(j["compression"]["after_max_length"], 1);
}

TEST(Cli, SegmentSplitsAtSinglePeak) {
  TempDir tmp;
  std::vector<std::vector<double>> rows(100, {0.01});
  rows[37][0] = 0.99;
  WriteFeatureMatrix(FeatureMatrix::FromRows(rows), tmp / "p.fbnk");
  const auto r = Cli({"segment", "--probs", (tmp / "p.fbnk").string(), "--max-ms", "600",
                      "--out", (tmp / "seg.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(ReadFile(tmp / "seg.json"));
  const std::string text = j.dump();
  EXPECT_NE(text.find("370"), std::string::npos) << text;
}

TEST(Cli, HistogramWritesCsv) {
  TempDir tmp;
  const auto r = Cli({"histogram", "--manifest", DataPath("filter/toy_manifest.tsv").string(),
                      "--stat", "char_ratio", "--bins", "10", "--out",
                      (tmp / "h.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["in_range"].get<int>() + j["below"].get<int>() + j["above"].get<int>(), 192);
  EXPECT_TRUE(fs::exists(tmp / "h.csv"));
}

TEST(Cli, SynthIsReproduciblePerSeed) {
  TempDir a, b, c;
  ASSERT_EQ(Cli({"--seed", "5", "synth", "--out-dir", a.Path().string(), "--utterances", "4"}).code,
            0);
  ASSERT_EQ(Cli({"--seed", "5", "synth", "--out-dir", b.Path().string(), "--utterances", "4"}).code,
            0);
  ASSERT_EQ(Cli({"--seed", "6", "synth", "--out-dir", c.Path().string(), "--utterances", "4"}).code,
            0);
  EXPECT_EQ(ReadFile(a / "corpus.tsv"), ReadFile(b / "corpus.tsv"));
  EXPECT_NE(ReadFile(a / "corpus.tsv"), ReadFile(c / "corpus.tsv"));

  const auto r = Cli({"simulate", "--corpus", (a / "corpus.tsv").string(), "--model",
                      "toy:" + (a / "scripts").string(), "--clock", "fake", "--trace-out",
                      (a / "traces").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["bleu"]["score"].get<double>(), 100.0);
}

}  // namespace
}  // namespace simulst::cli
