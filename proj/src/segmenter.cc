// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/segmenter.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "simulst/text_util.h"

namespace simulst {

namespace {

constexpr double kCoverTolerance = 1e-9;

struct FrameSpan {
  std::size_t begin;
  std::size_t end;
};

}  // namespace

void SplitProbabilities::Validate() const {
  if (!(frame_duration_ms > 0.0)) throw std::invalid_argument("frame duration must be > 0");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
      throw std::invalid_argument("split probability at frame " + std::to_string(i) +
                                  " is outside [0, 1]");
    }
  }
}

SplitProbabilities SplitProbabilitiesFromMatrix(const FeatureMatrix &m) {
  if (m.Dim() != 1) {
    throw std::invalid_argument("split probabilities need D = 1, got D = " +
                                std::to_string(m.Dim()));
  }
  SplitProbabilities probs;
  probs.values = m.Values();
  probs.frame_duration_ms = m.FrameDurationMs();
  probs.Validate();
  return probs;
}

void SegmentationConfig::Validate() const {
  if (!(max_segment_ms > 0.0)) throw std::invalid_argument("max_segment_ms must be > 0");
  if (!(min_segment_ms >= 0.0)) throw std::invalid_argument("min_segment_ms must be >= 0");
  if (!(min_segment_ms < max_segment_ms)) {
    throw std::invalid_argument("min_segment_ms must be < max_segment_ms");
  }
}

SegmentManifest DncSplit(const SplitProbabilities &probs, const SegmentationConfig &cfg) {
  probs.Validate();
  cfg.Validate();
  if (probs.Frames() == 0) throw std::invalid_argument("no frames to segment");

  const double ms = probs.frame_duration_ms;
  SegmentManifest out;
  out.total_ms = probs.DurationMs();

  // Explicit stack: flat probabilities peel one frame per level, which
  // would overflow the call stack on long audio.
  std::vector<FrameSpan> pending = {{0, probs.Frames()}};
  std::vector<FrameSpan> done;
  while (!pending.empty()) {
    const FrameSpan span = pending.back();
    pending.pop_back();
    const std::size_t len = span.end - span.begin;
    if (len * ms <= cfg.max_segment_ms) {
      done.push_back(span);
      continue;
    }

    std::size_t best = span.end;
    for (std::size_t f = span.begin + 1; f < span.end; ++f) {
      if ((f - span.begin) * ms < cfg.min_segment_ms) continue;
      if ((span.end - f) * ms < cfg.min_segment_ms) break;
      if (best == span.end || probs.values[f] > probs.values[best]) best = f;
    }
    if (best == span.end) {
      if (len < 2) {
        out.warnings.push_back("single frame at " + FormatDouble(span.begin * ms) +
                               " ms exceeds max_segment_ms");
        done.push_back(span);
        continue;
      }
      best = span.begin + len / 2;
      out.warnings.push_back("no split point in [" + FormatDouble(span.begin * ms) +
                             ", " + FormatDouble(span.end * ms) +
                             ") ms satisfies min_segment_ms; cut at midpoint " +
                             FormatDouble(best * ms));
    }
    pending.push_back({best, span.end});
    pending.push_back({span.begin, best});
  }

  std::sort(done.begin(), done.end(),
            [](const FrameSpan &a, const FrameSpan &b) { return a.begin < b.begin; });
  out.segments.reserve(done.size());
  for (const auto &s : done) out.segments.push_back({s.begin * ms, s.end * ms});
  return out;
}

SegmentManifest HybridSplit(std::span<const double> energy, const SegmentationConfig &cfg,
                            double frame_duration_ms) {
  cfg.Validate();
  if (energy.empty()) throw std::invalid_argument("no frames to segment");
  if (!(frame_duration_ms > 0.0)) throw std::invalid_argument("frame duration must be > 0");

  const double ms = frame_duration_ms;
  const std::size_t frames = energy.size();
  SegmentManifest out;
  out.total_ms = frames * ms;

  std::size_t start = 0;
  while ((frames - start) * ms > cfg.max_segment_ms) {
    std::size_t cut = frames;
    for (std::size_t f = start + 1; f < frames; ++f) {
      const double len = (f - start) * ms;
      if (len < cfg.min_segment_ms) continue;
      if (len > cfg.max_segment_ms) break;
      if (cut == frames || energy[f] <= energy[cut]) cut = f;
    }
    if (cut == frames) {
      const auto step = static_cast<std::size_t>(std::floor(cfg.max_segment_ms / ms));
      cut = std::min(frames - 1, start + std::max<std::size_t>(1, step));
      out.warnings.push_back("no cut within [min, max] after " +
                             FormatDouble(start * ms) + " ms; forced cut at " +
                             FormatDouble(cut * ms));
    }
    out.segments.push_back({start * ms, cut * ms});
    start = cut;
  }
  out.segments.push_back({start * ms, frames * ms});
  return out;
}

std::vector<std::string> ValidateManifest(const SegmentManifest &m, double total_ms) {
  std::vector<std::string> violations;
  if (m.segments.empty()) {
    violations.push_back("manifest has no segments");
    return violations;
  }
  if (std::abs(m.segments.front().start_ms) > kCoverTolerance) {
    violations.push_back("first segment starts at " +
                         FormatDouble(m.segments.front().start_ms) + " instead of 0");
  }
  for (std::size_t i = 0; i < m.segments.size(); ++i) {
    const auto &s = m.segments[i];
    if (!(s.end_ms > s.start_ms)) {
      violations.push_back("empty or reversed segment " + std::to_string(i) + " at " +
                           FormatDouble(s.start_ms));
    }
    if (i == 0) continue;
    const double prev_end = m.segments[i - 1].end_ms;
    if (s.start_ms > prev_end + kCoverTolerance) {
      violations.push_back("gap at " + FormatDouble(prev_end) + " to " +
                           FormatDouble(s.start_ms));
    } else if (s.start_ms < prev_end - kCoverTolerance) {
      violations.push_back("overlap at " + FormatDouble(s.start_ms) + " to " +
                           FormatDouble(prev_end));
    }
  }
  if (std::abs(m.segments.back().end_ms - total_ms) > kCoverTolerance) {
    violations.push_back("last segment ends at " +
                         FormatDouble(m.segments.back().end_ms) + " instead of " +
                         FormatDouble(total_ms));
  }
  return violations;
}

std::string SegmentManifestToJson(const SegmentManifest &m) {
  nlohmann::ordered_json j;
  j["total_ms"] = m.total_ms;
  j["segments"] = nlohmann::ordered_json::array();
  for (const auto &s : m.segments) {
    j["segments"].push_back({{"start_ms", s.start_ms}, {"end_ms", s.end_ms}});
  }
  j["warnings"] = m.warnings;
  return j.dump(2) + "\n";
}

SegmentManifest SegmentManifestFromJson(const std::string &text) {
  SegmentManifest m;
  try {
    const auto j = nlohmann::json::parse(text);
    m.total_ms = j.at("total_ms").get<double>();
    for (const auto &s : j.at("segments")) {
      m.segments.push_back({s.at("start_ms").get<double>(), s.at("end_ms").get<double>()});
    }
    if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed segment manifest: ") + e.what());
  }
  return m;
}

}  // namespace simulst
