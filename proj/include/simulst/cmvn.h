// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_CMVN_H_
#define SIMULST_CMVN_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "simulst/features.h"

namespace simulst {

// Variances below this are clamped so constant dimensions stay finite.
inline constexpr double kVarianceFloor = 1e-8;

enum class CmvnSource { kUtterance, kGlobal };

struct CmvnStats {
  std::vector<double> mean;
  std::vector<double> variance;  // population variance, floored
  CmvnSource source = CmvnSource::kUtterance;

  std::size_t Dim() const { return mean.size(); }
};

// Single-pass per-dimension moment accumulator (Welford). Merge() is
// associative, so partial accumulators from parallel workers can be combined.
class CmvnAccumulator {
 public:
  explicit CmvnAccumulator(std::size_t dim);

  void Accumulate(const FeatureMatrix &feats);
  void Merge(const CmvnAccumulator &other);

  std::uint64_t Count() const { return count_; }
  std::size_t Dim() const { return mean_.size(); }
  CmvnStats Finalize(CmvnSource source) const;

 private:
  std::uint64_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

CmvnStats EstimateUtteranceCmvn(const FeatureMatrix &feats);

// Frame-weighted pooling over every frame of every matrix.
CmvnStats EstimateGlobalCmvn(std::span<const FeatureMatrix> corpus);

FeatureMatrix ApplyCmvn(const FeatureMatrix &feats, const CmvnStats &stats);

std::string ToString(CmvnSource source);

// {"mean": [...], "variance": [...], "source": "utterance"|"global"}
std::string CmvnStatsToJson(const CmvnStats &stats);
CmvnStats CmvnStatsFromJson(const std::string &text);
void WriteCmvnStats(const CmvnStats &stats, const std::filesystem::path &path);
CmvnStats ReadCmvnStats(const std::filesystem::path &path);

}  // namespace simulst

#endif  // SIMULST_CMVN_H_
