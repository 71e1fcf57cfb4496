// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_SEGMENTER_H_
#define SIMULST_SEGMENTER_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "simulst/features.h"

namespace simulst {

struct SplitProbabilities {
  std::vector<double> values;  // one per frame, each in [0, 1]
  double frame_duration_ms = kFrameDurationMs;

  std::size_t Frames() const { return values.size(); }
  double DurationMs() const { return values.size() * frame_duration_ms; }
  void Validate() const;
};

// Reads the D = 1 feature container as per-frame probabilities.
SplitProbabilities SplitProbabilitiesFromMatrix(const FeatureMatrix &m);

struct SegmentationConfig {
  double max_segment_ms = 20000.0;
  double min_segment_ms = 0.0;

  void Validate() const;
};

struct Segment {
  double start_ms = 0.0;
  double end_ms = 0.0;

  double DurationMs() const { return end_ms - start_ms; }
  bool operator==(const Segment &) const = default;
};

struct SegmentManifest {
  double total_ms = 0.0;
  std::vector<Segment> segments;
  std::vector<std::string> warnings;
};

// Divide and conquer: any span longer than max_segment_ms is cut at its
// most probable split frame (lowest index on ties) such that both halves
// keep at least min_segment_ms, then both halves are handled the same way.
// A cut at frame f starts the right half at f. When no frame qualifies the
// span is cut at its midpoint and a warning is recorded.
SegmentManifest DncSplit(const SplitProbabilities &probs, const SegmentationConfig &cfg);

// Greedy left-to-right baseline: each cut goes to the lowest-energy frame
// whose segment length lies within [min_segment_ms, max_segment_ms]. Ties
// prefer the later frame, so flat energy yields max-length segments.
SegmentManifest HybridSplit(std::span<const double> energy, const SegmentationConfig &cfg,
                            double frame_duration_ms = kFrameDurationMs);

// Empty iff segments are sorted, contiguous, non-empty and cover
// [0, total_ms] exactly.
std::vector<std::string> ValidateManifest(const SegmentManifest &m, double total_ms);

// {"total_ms": X, "segments": [{"start_ms":..,"end_ms":..}], "warnings": [...]}
std::string SegmentManifestToJson(const SegmentManifest &m);
SegmentManifest SegmentManifestFromJson(const std::string &text);

}  // namespace simulst

#endif  // SIMULST_SEGMENTER_H_
