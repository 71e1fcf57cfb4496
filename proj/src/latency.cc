// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/latency.h"

#include <stdexcept>

#include "simulst/text_util.h"

namespace simulst {

namespace {

double LaggingSum(std::span<const double> delays, std::size_t tau, double total_ms,
                  std::size_t ref_len) {
  const double pace = total_ms / static_cast<double>(ref_len);
  double sum = 0.0;
  for (std::size_t i = 0; i < tau; ++i) sum += delays[i] - static_cast<double>(i) * pace;
  return sum / static_cast<double>(tau);
}

void CheckCommon(std::span<const double> delays, std::size_t ref_len) {
  if (delays.empty()) throw std::invalid_argument("average lagging over empty delays");
  if (ref_len == 0) throw std::invalid_argument("reference length must be >= 1");
}

}  // namespace

std::size_t LaggingCutoff(std::span<const double> source_delays, double total_ms) {
  for (std::size_t i = 0; i < source_delays.size(); ++i) {
    if (source_delays[i] >= total_ms) return i + 1;
  }
  return source_delays.size();
}

double AverageLagging(std::span<const double> delays, double total_ms,
                      std::size_t ref_len) {
  CheckCommon(delays, ref_len);
  for (double d : delays) {
    if (d > total_ms) {
      throw std::invalid_argument("delay exceeds duration (" + FormatDouble(d) + " > " +
                                  FormatDouble(total_ms) + ")");
    }
  }
  return LaggingSum(delays, LaggingCutoff(delays, total_ms), total_ms, ref_len);
}

double AverageLaggingCa(std::span<const double> ca_delays,
                        std::span<const double> source_delays, double total_ms,
                        std::size_t ref_len) {
  CheckCommon(ca_delays, ref_len);
  if (ca_delays.size() != source_delays.size()) {
    throw std::invalid_argument("CA and source delay counts differ");
  }
  return LaggingSum(ca_delays, LaggingCutoff(source_delays, total_ms), total_ms, ref_len);
}

LatencyRegime ClassifyRegime(double al_ms) {
  if (al_ms <= 1000.0) return LatencyRegime::kLow;
  if (al_ms <= 2000.0) return LatencyRegime::kMedium;
  if (al_ms <= 4000.0) return LatencyRegime::kHigh;
  return LatencyRegime::kAboveHigh;
}

std::string ToString(LatencyRegime regime) {
  switch (regime) {
    case LatencyRegime::kLow: return "low";
    case LatencyRegime::kMedium: return "medium";
    case LatencyRegime::kHigh: return "high";
    case LatencyRegime::kAboveHigh: return "above_high";
  }
  return "unknown";
}

double CorpusAggregate(std::span<const double> per_utterance) {
  if (per_utterance.empty()) throw std::invalid_argument("no utterances to aggregate");
  double sum = 0.0;
  for (double v : per_utterance) sum += v;
  return sum / static_cast<double>(per_utterance.size());
}

}  // namespace simulst
