// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_EVALUATION_H_
#define SIMULST_EVALUATION_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "simulst/bleu.h"
#include "simulst/features.h"
#include "simulst/latency.h"
#include "simulst/simul_policy.h"

namespace simulst {

// Joins pieces, turning "▁" markers into word breaks.
std::string Detokenize(std::span<const std::string> tokens);

// Emitted words with the delays of the token that completed each word.
struct WordDelays {
  std::vector<std::string> words;
  std::vector<double> source_delays;
  std::vector<double> wallclock_delays;
};
WordDelays GroupWords(const SimulTrace &trace);

// Trace file: JSON list of {token, source_delay_ms, wallclock_delay_ms}.
std::string TraceToJson(const SimulTrace &trace);
SimulTrace TraceFromJson(const std::string &text);
void WriteTrace(const SimulTrace &trace, const std::filesystem::path &path);
SimulTrace ReadTrace(const std::filesystem::path &path);

struct UtteranceMetrics {
  std::string id;
  double total_ms = 0.0;
  double al_ms = 0.0;
  double al_ca_ms = 0.0;
  std::size_t hyp_words = 0;
  std::size_t ref_words = 0;
  std::string hypothesis;
  std::string reference;
};

UtteranceMetrics ScoreUtterance(const std::string &id, const SimulTrace &trace,
                                double total_ms, const std::string &reference,
                                LagNormalization norm = LagNormalization::kReference);

struct EvalItem {
  std::string id;
  FeatureMatrix audio;
  std::string reference;
};

struct UtteranceFailure {
  std::string id;
  std::string error;
};

struct CorpusResult {
  StreamConfig config;
  std::vector<UtteranceMetrics> utterances;
  std::vector<SimulTrace> traces;  // parallel to `utterances`
  std::vector<UtteranceFailure> failures;
  LatencyReport latency;
  BleuScore bleu;
};

// Aggregates already-scored utterances into corpus AL, AL_CA and BLEU.
void AggregateCorpus(CorpusResult *result);

using ModelFactory =
    std::function<std::unique_ptr<TranslationModel>(const EvalItem &, Clock &)>;
using ClockFactory = std::function<std::unique_ptr<Clock>()>;

struct SweepOptions {
  LagNormalization normalization = LagNormalization::kReference;
  ClockFactory make_clock;  // defaults to SteadyClock
};

// Runs one session per item. Failing utterances are recorded and skipped.
CorpusResult RunCorpus(const StreamConfig &cfg, const ModelFactory &make_model,
                       std::span<const EvalItem> items, const SweepOptions &options = {});

struct CurveRow {
  double segment_ms = 0.0;
  std::size_t k = 0;
  double al_ms = 0.0;
  double al_ca_ms = 0.0;
  double bleu = 0.0;
};

std::vector<CorpusResult> Sweep(std::span<const StreamConfig> configs,
                                const ModelFactory &make_model,
                                std::span<const EvalItem> items,
                                const SweepOptions &options = {});

// Every segment size crossed with every k, segment-major.
std::vector<StreamConfig> SweepGrid(std::span<const double> segments_ms, std::size_t k_lo,
                                    std::size_t k_hi);

CurveRow ToCurveRow(const CorpusResult &result);
// segment_ms,k,AL,AL_CA,BLEU
std::string CurveToCsv(std::span<const CurveRow> rows);

// Per-utterance and aggregate AL, AL_CA, BLEU and regime.
std::string EvaluationReportToJson(const CorpusResult &result);

}  // namespace simulst

#endif  // SIMULST_EVALUATION_H_
