// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "cli.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simulst/bleu.h"
#include "simulst/cmvn.h"
#include "simulst/corpus.h"
#include "simulst/ctc.h"
#include "simulst/evaluation.h"
#include "simulst/features.h"
#include "simulst/segmenter.h"
#include "simulst/text_util.h"
#include "simulst/toy_model.h"

namespace simulst::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char *kOutputDirEnv = "SIMULST_OUTPUT_DIR";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

struct GlobalConfig {
  std::string log_level = "warn";
  std::uint64_t seed = 0;
  std::string output_dir;
};

class Context {
 public:
  Context(const GlobalConfig &cfg, std::ostream &out, std::ostream &err)
      : cfg_(cfg), out_(out), err_(err) {
    static const std::map<std::string, LogLevel> kLevels = {
        {"error", LogLevel::kError},
        {"warn", LogLevel::kWarn},
        {"info", LogLevel::kInfo},
        {"debug", LogLevel::kDebug}};
    level_ = kLevels.at(cfg.log_level);
    output_dir_ = cfg.output_dir;
    if (output_dir_.empty()) {
      if (const char *env = std::getenv(kOutputDirEnv)) output_dir_ = env;
    }
  }

  std::ostream &Out() { return out_; }
  std::uint64_t Seed() const { return cfg_.seed; }

  void Log(LogLevel level, const std::string &msg) {
    static const char *kNames[] = {"error", "warn", "info", "debug"};
    if (level <= level_) err_ << kNames[static_cast<int>(level)] << ": " << msg << "\n";
  }

  // Relative output paths land under the output directory when one is set.
  fs::path OutputPath(const std::string &p) const {
    fs::path path(p);
    if (path.is_relative() && !output_dir_.empty()) path = fs::path(output_dir_) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path;
  }
  fs::path OutputDir(const std::string &p) const {
    fs::path path(p);
    if (path.is_relative() && !output_dir_.empty()) path = fs::path(output_dir_) / path;
    fs::create_directories(path);
    return path;
  }

 private:
  GlobalConfig cfg_;
  std::ostream &out_;
  std::ostream &err_;
  LogLevel level_ = LogLevel::kWarn;
  std::string output_dir_;
};

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::string> ReadLines(const fs::path &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::pair<double, double> ParseRange(const std::string &s, const char *what) {
  const auto parts = Split(s, ':');
  if (parts.size() != 2) throw UsageError(std::string(what) + " must look like LO:HI");
  const auto lo = ParseDouble(parts[0]);
  const auto hi = ParseDouble(parts[1]);
  if (!lo || !hi || !(*lo < *hi)) {
    throw UsageError(std::string(what) + " must be numeric with LO < HI");
  }
  return {*lo, *hi};
}

std::vector<CorpusRecord> ValidRecords(const std::vector<ManifestEntry> &entries,
                                       Context &ctx) {
  std::vector<CorpusRecord> out;
  for (const auto &e : entries) {
    if (!e.record) {
      ctx.Log(LogLevel::kWarn, "line " + std::to_string(e.line) + ": " + e.error);
      continue;
    }
    if (const auto why = ValidateRecord(*e.record); !why.empty()) {
      ctx.Log(LogLevel::kWarn, "line " + std::to_string(e.line) + ": " + why);
      continue;
    }
    out.push_back(*e.record);
  }
  return out;
}

// --- filter -----------------------------------------------------------------

struct FilterArgs {
  std::string manifest, out, report;
  double min_ratio = 0.8, max_ratio = 1.6, nll_threshold = 4.0;
  bool no_nll = false;
  std::optional<double> min_cpf, max_cpf;
};

int RunFilter(const FilterArgs &a, Context &ctx) {
  FilterConfig cfg;
  cfg.min_char_ratio = a.min_ratio;
  cfg.max_char_ratio = a.max_ratio;
  cfg.nll_threshold = a.no_nll ? std::nullopt : std::optional<double>(a.nll_threshold);
  if (a.min_cpf || a.max_cpf) {
    cfg.chars_per_frame_bounds = {a.min_cpf.value_or(0.0),
                                  a.max_cpf.value_or(std::numeric_limits<double>::max())};
  }
  try {
    cfg.Validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const auto entries = ReadManifest(a.manifest);
  for (const auto &e : entries) {
    if (!e.record) ctx.Log(LogLevel::kInfo, "line " + std::to_string(e.line) + ": " + e.error);
  }
  const auto result = ApplyFilters(entries, cfg);
  WriteManifest(result.kept, ctx.OutputPath(a.out));
  const auto json = FilterReportToJson(result.report);
  WriteText(ctx.OutputPath(a.report), json);
  ctx.Out() << json;
  return kExitOk;
}

// --- histogram --------------------------------------------------------------

struct HistogramArgs {
  std::string manifest, stat, out, range, label;
  std::size_t bins = 50;
};

int RunHistogram(const HistogramArgs &a, Context &ctx) {
  const auto records = ValidRecords(ReadManifest(a.manifest), ctx);
  std::vector<double> values;
  for (const auto &r : records) {
    if (a.stat == "nll") {
      if (r.nll) values.push_back(*r.nll);
    } else if (a.stat == "char_ratio") {
      values.push_back(CharRatio(r));
    } else {
      values.push_back(CharsPerFrame(r));
    }
  }
  if (values.empty()) throw std::runtime_error("no values for statistic '" + a.stat + "'");
  std::optional<std::pair<double, double>> range;
  if (!a.range.empty()) range = ParseRange(a.range, "--range");
  const auto h = BuildHistogram(values, a.bins, range,
                                a.label.empty() ? fs::path(a.manifest).stem().string() : a.label);
  if (h.below || h.above) {
    ctx.Log(LogLevel::kWarn, std::to_string(h.below) + " values below and " +
                                 std::to_string(h.above) + " above the histogram range");
  }
  WriteText(ctx.OutputPath(a.out), HistogramToCsv(h));
  nlohmann::ordered_json summary;
  summary["label"] = h.dataset_label;
  summary["stat"] = a.stat;
  summary["in_range"] = h.InRange();
  summary["below"] = h.below;
  summary["above"] = h.above;
  ctx.Out() << summary.dump(2) << "\n";
  return kExitOk;
}

// --- segment ----------------------------------------------------------------

struct SegmentArgs {
  std::string probs, out, method = "dnc";
  double max_ms = 20000.0, min_ms = 0.0;
};

int RunSegment(const SegmentArgs &a, Context &ctx) {
  SegmentationConfig cfg{a.max_ms, a.min_ms};
  try {
    cfg.Validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const auto matrix = ReadFeatureMatrix(a.probs);
  SegmentManifest m;
  if (a.method == "dnc") {
    m = DncSplit(SplitProbabilitiesFromMatrix(matrix), cfg);
  } else {
    if (matrix.Dim() != 1) throw std::runtime_error("energy file needs D = 1");
    m = HybridSplit(matrix.Values(), cfg, matrix.FrameDurationMs());
  }
  for (const auto &w : m.warnings) ctx.Log(LogLevel::kWarn, w);
  const auto json = SegmentManifestToJson(m);
  WriteText(ctx.OutputPath(a.out), json);
  ctx.Out() << "segments: " << m.segments.size() << ", warnings: " << m.warnings.size()
            << "\n";
  return kExitOk;
}

// --- simulate / sweep -------------------------------------------------------

struct StreamArgs {
  std::string corpus, model, clock = "steady";
  std::optional<double> compute_ms;
  std::size_t max_output = 512;
  std::string normalize = "reference";
};

struct ToyBackend {
  std::map<std::string, Script> scripts;
  std::vector<EvalItem> items;
};

ToyBackend LoadToyBackend(const StreamArgs &a, Context &ctx) {
  const std::string prefix = "toy:";
  if (a.model.rfind(prefix, 0) != 0) {
    throw UsageError("--model must be toy:<script.json|dir>, got '" + a.model + "'");
  }
  ToyBackend backend;
  for (auto &s : LoadScripts(a.model.substr(prefix.size()))) {
    if (a.compute_ms) s.decode_cost_ms = *a.compute_ms;
    backend.scripts.emplace(s.id, std::move(s));
  }
  for (const auto &r : ValidRecords(ReadManifest(a.corpus), ctx)) {
    backend.items.push_back({r.id, FeatureMatrix(r.audio_frames, 1, 0.0), r.translation});
  }
  if (backend.items.empty()) throw std::runtime_error("corpus has no valid utterances");
  return backend;
}

ModelFactory MakeToyFactory(const ToyBackend &backend) {
  return [&backend](const EvalItem &item, Clock &clock) -> std::unique_ptr<TranslationModel> {
    const auto it = backend.scripts.find(item.id);
    if (it == backend.scripts.end()) {
      throw std::runtime_error("no toy script for utterance '" + item.id + "'");
    }
    if (it->second.TotalFrames() != item.audio.Frames()) {
      throw std::runtime_error("utterance '" + item.id + "' has " +
                               std::to_string(item.audio.Frames()) +
                               " frames but its script covers " +
                               std::to_string(it->second.TotalFrames()));
    }
    return std::make_unique<ToyModel>(it->second, dynamic_cast<FakeClock *>(&clock));
  };
}

SweepOptions MakeSweepOptions(const StreamArgs &a) {
  SweepOptions opt;
  opt.normalization =
      a.normalize == "hypothesis" ? LagNormalization::kHypothesis : LagNormalization::kReference;
  if (a.clock == "fake") {
    opt.make_clock = [] { return std::make_unique<FakeClock>(); };
  } else {
    opt.make_clock = [] { return std::make_unique<SteadyClock>(); };
  }
  return opt;
}

void LogFailures(const CorpusResult &r, Context &ctx) {
  for (const auto &f : r.failures) ctx.Log(LogLevel::kWarn, f.id + ": " + f.error);
}

struct SimulateArgs {
  StreamArgs stream;
  double segment_ms = 320.0;
  std::size_t k = 5;
  std::string trace_out, report;
};

int RunSimulate(const SimulateArgs &a, Context &ctx) {
  const auto backend = LoadToyBackend(a.stream, ctx);
  StreamConfig cfg;
  cfg.segment_ms = a.segment_ms;
  cfg.k = a.k;
  cfg.max_output_tokens = a.stream.max_output;
  try {
    cfg.Validate();
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  const auto result =
      RunCorpus(cfg, MakeToyFactory(backend), backend.items, MakeSweepOptions(a.stream));
  LogFailures(result, ctx);
  const fs::path dir = ctx.OutputDir(a.trace_out);
  for (std::size_t i = 0; i < result.utterances.size(); ++i) {
    WriteTrace(result.traces[i], dir / (result.utterances[i].id + ".json"));
  }
  const auto json = EvaluationReportToJson(result);
  if (!a.report.empty()) WriteText(ctx.OutputPath(a.report), json);
  ctx.Out() << json;
  return result.utterances.empty() ? kExitData : kExitOk;
}

struct SweepArgs {
  StreamArgs stream;
  std::string k_range = "1:14", segments = "320,640", curve_out;
};

int RunSweep(const SweepArgs &a, Context &ctx) {
  const auto kr = Split(a.k_range, ':');
  const auto k_lo = kr.size() == 2 ? ParseSize(kr[0]) : std::nullopt;
  const auto k_hi = kr.size() == 2 ? ParseSize(kr[1]) : std::nullopt;
  if (!k_lo || !k_hi || *k_lo < 1 || *k_lo > *k_hi) {
    throw UsageError("--k-range must look like LO:HI with 1 <= LO <= HI");
  }
  std::vector<double> segments;
  for (const auto &s : Split(a.segments, ',')) {
    const auto v = ParseDouble(s);
    if (!v || !(*v > 0.0)) throw UsageError("--segments must be positive numbers");
    segments.push_back(*v);
  }
  auto grid = SweepGrid(segments, *k_lo, *k_hi);
  for (auto &g : grid) g.max_output_tokens = a.stream.max_output;

  const auto backend = LoadToyBackend(a.stream, ctx);
  const auto results =
      Sweep(grid, MakeToyFactory(backend), backend.items, MakeSweepOptions(a.stream));
  std::vector<CurveRow> rows;
  for (const auto &r : results) {
    LogFailures(r, ctx);
    rows.push_back(ToCurveRow(r));
  }
  const auto csv = CurveToCsv(rows);
  WriteText(ctx.OutputPath(a.curve_out), csv);
  ctx.Out() << csv;
  return kExitOk;
}

// --- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string traces, refs, out, normalize = "reference";
};

struct RefRow {
  std::string id;
  double total_ms;
  std::string reference;
};

// Header-driven: id, total_ms or audio_frames, reference or translation.
std::vector<RefRow> ReadRefs(const fs::path &path) {
  const auto lines = ReadLines(path);
  if (lines.empty()) throw std::runtime_error(path.string() + ": empty references file");
  const auto header = Split(lines[0], '\t');
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[std::string(Trim(header[i]))] = i;
  const bool frames = !col.count("total_ms") && col.count("audio_frames");
  const std::string dur = frames ? "audio_frames" : "total_ms";
  const std::string ref = col.count("reference") ? "reference" : "translation";
  if (!col.count("id") || !col.count(dur) || !col.count(ref)) {
    throw std::runtime_error(path.string() +
                             ": references need columns id, total_ms|audio_frames, "
                             "reference|translation");
  }
  std::vector<RefRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    const auto f = Split(lines[i], '\t');
    if (f.size() != header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) +
                               ": wrong field count");
    }
    const auto d = ParseDouble(f[col[dur]]);
    if (!d || !(*d > 0.0)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(i + 1) +
                               ": bad duration");
    }
    rows.push_back({std::string(Trim(f[col["id"]])), frames ? *d * kFrameDurationMs : *d,
                    f[col[ref]]});
  }
  return rows;
}

int RunEvaluate(const EvaluateArgs &a, Context &ctx) {
  const auto norm = a.normalize == "hypothesis" ? LagNormalization::kHypothesis
                                                : LagNormalization::kReference;
  CorpusResult result;
  for (const auto &r : ReadRefs(a.refs)) {
    const fs::path trace_path = fs::path(a.traces) / (r.id + ".json");
    try {
      const auto trace = ReadTrace(trace_path);
      auto m = ScoreUtterance(r.id, trace, r.total_ms, r.reference, norm);
      if (!std::isfinite(m.al_ms)) result.failures.push_back({r.id, "empty translation"});
      result.utterances.push_back(std::move(m));
      result.traces.push_back(trace);
    } catch (const std::exception &e) {
      result.failures.push_back({r.id, e.what()});
    }
  }
  LogFailures(result, ctx);
  if (result.utterances.empty()) throw std::runtime_error("no trace could be scored");
  AggregateCorpus(&result);
  const auto json = EvaluationReportToJson(result);
  WriteText(ctx.OutputPath(a.out), json);
  ctx.Out() << json;
  return kExitOk;
}

// --- bleu -------------------------------------------------------------------

struct BleuArgs {
  std::string hyp, ref;
};

int RunBleu(const BleuArgs &a, Context &ctx) {
  const auto hyps = ReadLines(a.hyp);
  const auto refs = ReadLines(a.ref);
  if (hyps.size() != refs.size()) {
    throw std::runtime_error("hypothesis file has " + std::to_string(hyps.size()) +
                             " lines, reference file has " + std::to_string(refs.size()));
  }
  const auto b = CorpusBleu(hyps, refs);
  std::ostringstream line;
  line << kBleuSignature << " = " << FormatDouble(b.score) << " ";
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    line << (n ? "/" : "") << FormatDouble(100.0 * b.precisions[n]);
  }
  line << " (BP = " << FormatDouble(b.brevity_penalty) << " hyp_len = " << b.hyp_len
       << " ref_len = " << b.ref_len << ")";
  ctx.Out() << line.str() << "\n";
  return kExitOk;
}

// --- ctc --------------------------------------------------------------------

struct CtcArgs {
  std::string posterior, vocab, feats;
  std::optional<std::size_t> max_input_len;
};

int RunCtc(const CtcArgs &a, Context &ctx) {
  const auto logprobs = ReadFeatureMatrix(a.posterior);
  Vocabulary vocab = Vocabulary::WordLevel(logprobs.Dim());
  if (!a.vocab.empty()) {
    auto pieces = ReadLines(a.vocab);
    while (!pieces.empty() && pieces.back().empty()) pieces.pop_back();
    if (pieces.size() != logprobs.Dim()) {
      throw std::runtime_error("vocabulary has " + std::to_string(pieces.size()) +
                               " tokens but the posterior has " +
                               std::to_string(logprobs.Dim()) + " columns");
    }
    vocab = Vocabulary::FromPieces(std::move(pieces));
  }
  CtcPosterior post(vocab, logprobs);
  const auto greedy = GreedyLabels(post);
  const auto collapsed = Collapse(greedy, vocab);
  const FeatureMatrix states = a.feats.empty() ? logprobs : ReadFeatureMatrix(a.feats);
  const auto compressed = CtcCompress(states, post);

  nlohmann::ordered_json j;
  j["frames"] = post.Frames();
  j["vocab_size"] = vocab.Size();
  j["greedy_labels"] = greedy;
  j["collapsed"] = collapsed;
  std::vector<std::string> tokens;
  for (auto y : collapsed) tokens.push_back(vocab.Token(y));
  j["collapsed_tokens"] = tokens;
  j["word_count"] = CountWords(post);
  nlohmann::ordered_json c;
  c["ctc_groups"] = compressed.Size();
  c["group_sizes"] = compressed.group_sizes;
  c["ratio"] = post.Frames() ? static_cast<double>(compressed.Size()) / post.Frames() : 1.0;
  c["fixed_groups"] = FixedCompress(states).Size();
  if (a.max_input_len) {
    c["max_input_len"] = *a.max_input_len;
    c["merge_factor"] = MaxOutputLengthFactor(compressed.Size(), *a.max_input_len);
    c["after_max_length"] = MaxOutputLengthMerge(compressed, *a.max_input_len).Size();
  }
  j["compression"] = c;
  ctx.Out() << j.dump(2) << "\n";
  return kExitOk;
}

// --- cmvn -------------------------------------------------------------------

struct CmvnArgs {
  std::vector<std::string> feats;
  std::string mode = "utterance", out;
};

int RunCmvn(const CmvnArgs &a, Context &ctx) {
  std::vector<FeatureMatrix> mats;
  for (const auto &f : a.feats) mats.push_back(ReadFeatureMatrix(f));
  CmvnStats stats;
  if (a.mode == "utterance") {
    if (mats.size() != 1) throw UsageError("utterance mode takes exactly one --feats file");
    stats = EstimateUtteranceCmvn(mats.front());
  } else {
    stats = EstimateGlobalCmvn(mats);
  }
  WriteCmvnStats(stats, ctx.OutputPath(a.out));
  ctx.Out() << CmvnStatsToJson(stats);
  return kExitOk;
}

// --- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  std::size_t utterances = 10;
  std::size_t min_words = 5, max_words = 25;
};

// Random toy corpus: scripts/<id>.json plus corpus.tsv, reproducible per seed.
int RunSynth(const SynthArgs &a, Context &ctx) {
  static const std::vector<std::string> kLexicon = {
      "the",   "model", "speech", "we",   "train", "data",  "is",    "a",
      "good",  "test",  "time",   "word", "audio", "with",  "not",   "low",
      "cost",  "to",    "of",     "and",  "our",   "task",  "high",  "quality"};
  if (a.min_words < 1 || a.min_words > a.max_words) {
    throw UsageError("word count bounds must satisfy 1 <= min <= max");
  }
  std::mt19937_64 rng(ctx.Seed());
  std::uniform_int_distribution<std::size_t> n_words(a.min_words, a.max_words);
  std::uniform_int_distribution<std::size_t> pick(0, kLexicon.size() - 1);
  std::uniform_int_distribution<int> gap_frames(15, 60);
  std::uniform_int_distribution<int> n_pieces(1, 2);

  const fs::path dir = ctx.OutputDir(a.out_dir);
  fs::create_directories(dir / "scripts");
  std::vector<CorpusRecord> records;
  for (std::size_t u = 0; u < a.utterances; ++u) {
    Script s;
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%04zu", u);
    s.id = id;
    double t = 0.0;
    std::string transcript;
    const std::size_t n = n_words(rng);
    for (std::size_t i = 0; i < n; ++i) {
      ScriptWord w;
      do {
        w.text = kLexicon[pick(rng)];
      } while (!s.words.empty() && s.words.back().text == w.text);
      t += 10.0 * gap_frames(rng);
      w.end_ms = t;
      // Target pieces: the reversed word, optionally split in two.
      std::string rev(w.text.rbegin(), w.text.rend());
      if (n_pieces(rng) == 2 && rev.size() > 2) {
        w.target = {"\xe2\x96\x81" + rev.substr(0, rev.size() / 2), rev.substr(rev.size() / 2)};
      } else {
        w.target = {"\xe2\x96\x81" + rev};
      }
      transcript += (transcript.empty() ? "" : " ") + w.text;
      s.words.push_back(std::move(w));
    }
    s.total_ms = t + 10.0 * gap_frames(rng);
    s.Validate();
    WriteText(dir / "scripts" / (s.id + ".json"), ScriptToJson(s));
    records.push_back({s.id, s.TotalFrames(), transcript, s.ReferenceText(), std::nullopt,
                       Origin::kNative});
  }
  WriteManifest(records, dir / "corpus.tsv");
  ctx.Out() << "wrote " << records.size() << " utterances to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int Dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Simultaneous speech translation toolkit: CTC compression, corpus "
               "filtering, segmentation, wait-k simulation and latency/quality scoring"};
  app.require_subcommand(0, 1);

  GlobalConfig global;
  bool version = false;
  app.add_flag("--version", version, "Print version and BLEU signature");
  app.add_option("--log-level", global.log_level, "error|warn|info|debug")
      ->check(CLI::IsMember({"error", "warn", "info", "debug"}));
  app.add_option("--seed", global.seed, "Seed for randomized corpus generation");
  app.add_option("--output-dir", global.output_dir,
                 std::string("Base for relative output paths (default $") + kOutputDirEnv +
                     ")");

  FilterArgs filter;
  auto *filter_cmd = app.add_subcommand("filter", "Char-ratio / NLL corpus filtering");
  filter_cmd->add_option("--manifest", filter.manifest)->required();
  filter_cmd->add_option("--out", filter.out)->required();
  filter_cmd->add_option("--report", filter.report)->required();
  filter_cmd->add_option("--min-ratio", filter.min_ratio);
  filter_cmd->add_option("--max-ratio", filter.max_ratio);
  filter_cmd->add_option("--nll-threshold", filter.nll_threshold);
  filter_cmd->add_flag("--no-nll-filter", filter.no_nll);
  filter_cmd->add_option("--min-chars-per-frame", filter.min_cpf);
  filter_cmd->add_option("--max-chars-per-frame", filter.max_cpf);

  HistogramArgs hist;
  auto *hist_cmd = app.add_subcommand("histogram", "Histogram of a manifest statistic");
  hist_cmd->add_option("--manifest", hist.manifest)->required();
  hist_cmd->add_option("--stat", hist.stat)
      ->required()
      ->check(CLI::IsMember({"nll", "char_ratio", "chars_per_frame"}));
  hist_cmd->add_option("--bins", hist.bins)->check(CLI::PositiveNumber);
  hist_cmd->add_option("--out", hist.out)->required();
  hist_cmd->add_option("--range", hist.range, "LO:HI");
  hist_cmd->add_option("--label", hist.label);

  SegmentArgs seg;
  auto *seg_cmd = app.add_subcommand("segment", "Split long audio into segments");
  seg_cmd->add_option("--probs", seg.probs, "FBNK file with D = 1")->required();
  seg_cmd->add_option("--max-ms", seg.max_ms);
  seg_cmd->add_option("--min-ms", seg.min_ms);
  seg_cmd->add_option("--out", seg.out)->required();
  seg_cmd->add_option("--method", seg.method)->check(CLI::IsMember({"dnc", "hybrid"}));

  auto add_stream = [](CLI::App *cmd, StreamArgs *s) {
    cmd->add_option("--corpus", s->corpus, "Manifest TSV; translation is the reference")
        ->required();
    cmd->add_option("--model", s->model, "toy:<script.json|dir>")->required();
    cmd->add_option("--clock", s->clock)->check(CLI::IsMember({"steady", "fake"}));
    cmd->add_option("--compute-ms", s->compute_ms,
                    "Simulated cost per decoder call (fake clock)");
    cmd->add_option("--max-output", s->max_output)->check(CLI::PositiveNumber);
    cmd->add_option("--normalize", s->normalize)
        ->check(CLI::IsMember({"reference", "hypothesis"}));
  };

  SimulateArgs sim;
  auto *sim_cmd = app.add_subcommand("simulate", "Run wait-k sessions over a corpus");
  add_stream(sim_cmd, &sim.stream);
  sim_cmd->add_option("--segment-ms", sim.segment_ms);
  sim_cmd->add_option("--k", sim.k);
  sim_cmd->add_option("--trace-out", sim.trace_out)->required();
  sim_cmd->add_option("--report", sim.report);

  SweepArgs sweep;
  auto *sweep_cmd = app.add_subcommand("sweep", "AL/AL_CA/BLEU curve over k and segment");
  add_stream(sweep_cmd, &sweep.stream);
  sweep_cmd->add_option("--k-range", sweep.k_range);
  sweep_cmd->add_option("--segments", sweep.segments);
  sweep_cmd->add_option("--curve-out", sweep.curve_out)->required();

  EvaluateArgs eval;
  auto *eval_cmd = app.add_subcommand("evaluate", "Score trace files");
  eval_cmd->add_option("--traces", eval.traces)->required();
  eval_cmd->add_option("--refs", eval.refs)->required();
  eval_cmd->add_option("--out", eval.out)->required();
  eval_cmd->add_option("--normalize", eval.normalize)
      ->check(CLI::IsMember({"reference", "hypothesis"}));

  BleuArgs bleu;
  auto *bleu_cmd = app.add_subcommand("bleu", "Corpus BLEU of two line-aligned files");
  bleu_cmd->add_option("--hyp", bleu.hyp)->required();
  bleu_cmd->add_option("--ref", bleu.ref)->required();

  CtcArgs ctc;
  auto *ctc_cmd = app.add_subcommand("ctc", "Greedy CTC output and compression stats");
  ctc_cmd->add_option("--posterior", ctc.posterior, "FBNK file of log-probs")->required();
  ctc_cmd->add_option("--vocab", ctc.vocab, "One token per line, blank first");
  ctc_cmd->add_option("--feats", ctc.feats, "Encoder states to compress");
  ctc_cmd->add_option("--max-input-len", ctc.max_input_len);

  CmvnArgs cmvn;
  auto *cmvn_cmd = app.add_subcommand("cmvn", "Estimate CMVN statistics");
  cmvn_cmd->add_option("--feats", cmvn.feats)->required();
  cmvn_cmd->add_option("--mode", cmvn.mode)->check(CLI::IsMember({"utterance", "global"}));
  cmvn_cmd->add_option("--out", cmvn.out)->required();

  SynthArgs synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate a random toy corpus (--seed)");
  synth_cmd->add_option("--out-dir", synth.out_dir)->required();
  synth_cmd->add_option("--utterances", synth.utterances);
  synth_cmd->add_option("--min-words", synth.min_words);
  synth_cmd->add_option("--max-words", synth.max_words);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (version) {
    out << "simulst " << kVersion << "\n" << kBleuSignature << "\n";
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  Context ctx(global, out, err);
  try {
    if (filter_cmd->parsed()) return RunFilter(filter, ctx);
    if (hist_cmd->parsed()) return RunHistogram(hist, ctx);
    if (seg_cmd->parsed()) return RunSegment(seg, ctx);
    if (sim_cmd->parsed()) return RunSimulate(sim, ctx);
    if (sweep_cmd->parsed()) return RunSweep(sweep, ctx);
    if (eval_cmd->parsed()) return RunEvaluate(eval, ctx);
    if (bleu_cmd->parsed()) return RunBleu(bleu, ctx);
    if (ctc_cmd->parsed()) return RunCtc(ctc, ctx);
    if (cmvn_cmd->parsed()) return RunCmvn(cmvn, ctx);
    if (synth_cmd->parsed()) return RunSynth(synth, ctx);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace simulst::cli
