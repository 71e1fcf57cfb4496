// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/evaluation.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "simulst/text_util.h"

namespace simulst {

namespace {

const std::string kWordMarker = "\xe2\x96\x81";  // U+2581

std::string StripMarker(const std::string &piece) {
  return BeginsTargetWord(piece) ? piece.substr(kWordMarker.size()) : piece;
}

nlohmann::ordered_json BleuToJson(const BleuScore &b) {
  nlohmann::ordered_json j;
  j["score"] = b.score;
  j["precisions"] = b.precisions;
  j["brevity_penalty"] = b.brevity_penalty;
  j["hyp_len"] = b.hyp_len;
  j["ref_len"] = b.ref_len;
  j["signature"] = std::string(kBleuSignature);
  return j;
}

nlohmann::ordered_json MaybeNumber(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string Detokenize(std::span<const std::string> tokens) {
  std::string text;
  for (const auto &t : tokens) {
    if (BeginsTargetWord(t)) {
      text += ' ';
      text += StripMarker(t);
    } else {
      text += t;
    }
  }
  std::string out;
  for (const auto &w : SplitWhitespace(text)) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

WordDelays GroupWords(const SimulTrace &trace) {
  WordDelays out;
  for (const auto &e : trace.events) {
    if (out.words.empty() || BeginsTargetWord(e.token)) {
      out.words.push_back(StripMarker(e.token));
      out.source_delays.push_back(e.source_delay_ms);
      out.wallclock_delays.push_back(e.wallclock_delay_ms);
    } else {
      out.words.back() += e.token;
      out.source_delays.back() = e.source_delay_ms;
      out.wallclock_delays.back() = e.wallclock_delay_ms;
    }
  }
  return out;
}

std::string TraceToJson(const SimulTrace &trace) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto &e : trace.events) {
    nlohmann::ordered_json ev;
    ev["token"] = e.token;
    ev["source_delay_ms"] = e.source_delay_ms;
    ev["wallclock_delay_ms"] = e.wallclock_delay_ms;
    j.push_back(std::move(ev));
  }
  return j.dump(2) + "\n";
}

SimulTrace TraceFromJson(const std::string &text) {
  SimulTrace trace;
  try {
    for (const auto &ev : nlohmann::json::parse(text)) {
      trace.events.push_back({ev.at("token").get<std::string>(),
                              ev.at("source_delay_ms").get<double>(),
                              ev.at("wallclock_delay_ms").get<double>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed trace: ") + e.what());
  }
  return trace;
}

void WriteTrace(const SimulTrace &trace, const std::filesystem::path &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << TraceToJson(trace);
}

SimulTrace ReadTrace(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open trace " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return TraceFromJson(ss.str());
  } catch (const std::exception &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

UtteranceMetrics ScoreUtterance(const std::string &id, const SimulTrace &trace,
                                double total_ms, const std::string &reference,
                                LagNormalization norm) {
  UtteranceMetrics m;
  m.id = id;
  m.total_ms = total_ms;
  m.reference = reference;
  m.ref_words = SplitWhitespace(reference).size();
  const auto words = GroupWords(trace);
  m.hyp_words = words.words.size();
  m.hypothesis = Detokenize(trace.Tokens());
  if (m.ref_words == 0) throw std::invalid_argument("utterance '" + id + "' has an empty reference");
  if (m.hyp_words == 0) {
    m.al_ms = m.al_ca_ms = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  const std::size_t n = norm == LagNormalization::kReference ? m.ref_words : m.hyp_words;
  m.al_ms = AverageLagging(words.source_delays, total_ms, n);
  m.al_ca_ms = AverageLaggingCa(words.wallclock_delays, words.source_delays, total_ms, n);
  return m;
}

void AggregateCorpus(CorpusResult *result) {
  std::vector<double> al, al_ca;
  std::vector<std::string> hyps, refs;
  for (const auto &u : result->utterances) {
    if (std::isfinite(u.al_ms)) {
      al.push_back(u.al_ms);
      al_ca.push_back(u.al_ca_ms);
    }
    hyps.push_back(u.hypothesis);
    refs.push_back(u.reference);
  }
  result->latency = {};
  result->latency.n_utterances = al.size();
  if (!al.empty()) {
    result->latency.al_ms = CorpusAggregate(al);
    result->latency.al_ca_ms = CorpusAggregate(al_ca);
  } else {
    result->latency.al_ms = result->latency.al_ca_ms =
        std::numeric_limits<double>::quiet_NaN();
  }
  result->latency.regime = ClassifyRegime(result->latency.al_ms);
  result->bleu = hyps.empty() ? BleuScore{} : CorpusBleu(hyps, refs);
}

CorpusResult RunCorpus(const StreamConfig &cfg, const ModelFactory &make_model,
                       std::span<const EvalItem> items, const SweepOptions &options) {
  CorpusResult result;
  result.config = cfg;
  for (const auto &item : items) {
    try {
      std::unique_ptr<Clock> clock =
          options.make_clock ? options.make_clock() : std::make_unique<SteadyClock>();
      auto model = make_model(item, *clock);
      SimulTrace trace = RunSession(cfg, *model, item.audio, *clock);
      auto metrics =
          ScoreUtterance(item.id, trace, item.audio.DurationMs(), item.reference,
                         options.normalization);
      if (!std::isfinite(metrics.al_ms)) {
        result.failures.push_back({item.id, "empty translation; latency undefined"});
      }
      result.utterances.push_back(std::move(metrics));
      result.traces.push_back(std::move(trace));
    } catch (const std::exception &e) {
      result.failures.push_back({item.id, e.what()});
    }
  }
  AggregateCorpus(&result);
  return result;
}

std::vector<CorpusResult> Sweep(std::span<const StreamConfig> configs,
                                const ModelFactory &make_model,
                                std::span<const EvalItem> items,
                                const SweepOptions &options) {
  if (items.empty()) throw std::invalid_argument("sweep over an empty corpus");
  std::vector<CorpusResult> out;
  out.reserve(configs.size());
  for (const auto &cfg : configs) out.push_back(RunCorpus(cfg, make_model, items, options));
  return out;
}

std::vector<StreamConfig> SweepGrid(std::span<const double> segments_ms, std::size_t k_lo,
                                    std::size_t k_hi) {
  if (k_lo < 1 || k_lo > k_hi) throw std::invalid_argument("k range must satisfy 1 <= lo <= hi");
  std::vector<StreamConfig> grid;
  for (double seg : segments_ms) {
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
      StreamConfig cfg;
      cfg.segment_ms = seg;
      cfg.k = k;
      cfg.Validate();
      grid.push_back(cfg);
    }
  }
  return grid;
}

CurveRow ToCurveRow(const CorpusResult &result) {
  return {result.config.segment_ms, result.config.k, result.latency.al_ms,
          result.latency.al_ca_ms, result.bleu.score};
}

std::string CurveToCsv(std::span<const CurveRow> rows) {
  std::string out = "segment_ms,k,AL,AL_CA,BLEU\n";
  for (const auto &r : rows) {
    out += FormatDouble(r.segment_ms) + "," + std::to_string(r.k) + "," +
           FormatDouble(r.al_ms) + "," + FormatDouble(r.al_ca_ms) + "," +
           FormatDouble(r.bleu) + "\n";
  }
  return out;
}

std::string EvaluationReportToJson(const CorpusResult &result) {
  nlohmann::ordered_json j;
  j["n_utterances"] = result.utterances.size();
  j["al_ms"] = MaybeNumber(result.latency.al_ms);
  j["al_ca_ms"] = MaybeNumber(result.latency.al_ca_ms);
  j["regime"] = std::isfinite(result.latency.al_ms) ? ToString(result.latency.regime) : "undefined";
  j["bleu"] = BleuToJson(result.bleu);
  j["utterances"] = nlohmann::ordered_json::array();
  for (const auto &u : result.utterances) {
    nlohmann::ordered_json ju;
    ju["id"] = u.id;
    ju["total_ms"] = u.total_ms;
    ju["al_ms"] = MaybeNumber(u.al_ms);
    ju["al_ca_ms"] = MaybeNumber(u.al_ca_ms);
    ju["regime"] = std::isfinite(u.al_ms) ? ToString(ClassifyRegime(u.al_ms)) : "undefined";
    ju["bleu"] = SentenceBleu(u.hypothesis, u.reference).score;
    ju["hyp_words"] = u.hyp_words;
    ju["ref_words"] = u.ref_words;
    ju["hypothesis"] = u.hypothesis;
    ju["reference"] = u.reference;
    j["utterances"].push_back(std::move(ju));
  }
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto &f : result.failures) {
    j["failures"].push_back({{"id", f.id}, {"error", f.error}});
  }
  return j.dump(2) + "\n";
}

}  // namespace simulst
