// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_LATENCY_H_
#define SIMULST_LATENCY_H_

#include <cstddef>
#include <span>
#include <string>

namespace simulst {

// How the ideal per-word pace (i - 1) * T / n is normalized.
enum class LagNormalization {
  kReference,   // n = reference word count
  kHypothesis,  // n = number of emitted words
};

// Average Lagging over emission delays d_1..d_|d| (ms from the start of the
// source):
//   AL = 1/tau * sum_{i=1..tau} (d_i - (i - 1) * total_ms / ref_len)
// where tau is the first index whose delay reaches total_ms (|d| if none).
// Negative values are legal and are not clamped.
double AverageLagging(std::span<const double> delays, double total_ms,
                      std::size_t ref_len);

// Same formula over computation-aware delays. tau is taken from
// `source_delays` so both metrics truncate at the same emission; CA delays
// may exceed total_ms.
double AverageLaggingCa(std::span<const double> ca_delays,
                        std::span<const double> source_delays, double total_ms,
                        std::size_t ref_len);

// tau as defined above, 1-based.
std::size_t LaggingCutoff(std::span<const double> source_delays, double total_ms);

enum class LatencyRegime { kLow, kMedium, kHigh, kAboveHigh };

// Low <= 1000 ms < Medium <= 2000 ms < High <= 4000 ms < AboveHigh.
LatencyRegime ClassifyRegime(double al_ms);
std::string ToString(LatencyRegime regime);

struct LatencyReport {
  double al_ms = 0.0;
  double al_ca_ms = 0.0;
  LatencyRegime regime = LatencyRegime::kLow;
  std::size_t n_utterances = 0;
};

// Unweighted mean.
double CorpusAggregate(std::span<const double> per_utterance);

}  // namespace simulst

#endif  // SIMULST_LATENCY_H_
