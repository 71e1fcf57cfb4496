// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/cmvn.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace simulst {

CmvnAccumulator::CmvnAccumulator(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("CMVN dimension must be >= 1");
}

void CmvnAccumulator::Accumulate(const FeatureMatrix &feats) {
  if (feats.Dim() != Dim()) {
    throw std::invalid_argument("CMVN accumulator has dim " + std::to_string(Dim()) +
                                ", matrix has " + std::to_string(feats.Dim()));
  }
  for (std::size_t t = 0; t < feats.Frames(); ++t) {
    ++count_;
    const auto row = feats.Row(t);
    for (std::size_t d = 0; d < Dim(); ++d) {
      const double delta = row[d] - mean_[d];
      mean_[d] += delta / static_cast<double>(count_);
      m2_[d] += delta * (row[d] - mean_[d]);
    }
  }
}

void CmvnAccumulator::Merge(const CmvnAccumulator &other) {
  if (other.Dim() != Dim()) throw std::invalid_argument("CMVN merge dim mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t d = 0; d < Dim(); ++d) {
    const double delta = other.mean_[d] - mean_[d];
    mean_[d] += delta * nb / n;
    m2_[d] += other.m2_[d] + delta * delta * na * nb / n;
  }
  count_ += other.count_;
}

CmvnStats CmvnAccumulator::Finalize(CmvnSource source) const {
  if (count_ == 0) throw std::invalid_argument("empty utterance");
  CmvnStats stats;
  stats.source = source;
  stats.mean = mean_;
  stats.variance.resize(Dim());
  for (std::size_t d = 0; d < Dim(); ++d) {
    stats.variance[d] =
        std::max(m2_[d] / static_cast<double>(count_), kVarianceFloor);
  }
  return stats;
}

CmvnStats EstimateUtteranceCmvn(const FeatureMatrix &feats) {
  if (feats.Empty()) throw std::invalid_argument("empty utterance");
  CmvnAccumulator acc(feats.Dim());
  acc.Accumulate(feats);
  return acc.Finalize(CmvnSource::kUtterance);
}

CmvnStats EstimateGlobalCmvn(std::span<const FeatureMatrix> corpus) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus for global CMVN");
  CmvnAccumulator acc(corpus.front().Dim());
  for (const auto &m : corpus) acc.Accumulate(m);
  if (acc.Count() == 0) throw std::invalid_argument("global CMVN corpus has no frames");
  return acc.Finalize(CmvnSource::kGlobal);
}

FeatureMatrix ApplyCmvn(const FeatureMatrix &feats, const CmvnStats &stats) {
  if (stats.Dim() != feats.Dim() || stats.variance.size() != stats.Dim()) {
    throw std::invalid_argument("CMVN stats dim " + std::to_string(stats.Dim()) +
                                " does not match features dim " +
                                std::to_string(feats.Dim()));
  }
  std::vector<double> inv_std(stats.Dim());
  for (std::size_t d = 0; d < stats.Dim(); ++d) {
    inv_std[d] = 1.0 / std::sqrt(stats.variance[d]);
  }
  FeatureMatrix out = feats;
  for (std::size_t t = 0; t < out.Frames(); ++t) {
    auto row = out.Row(t);
    for (std::size_t d = 0; d < row.size(); ++d) {
      row[d] = (row[d] - stats.mean[d]) * inv_std[d];
    }
  }
  return out;
}

std::string ToString(CmvnSource source) {
  return source == CmvnSource::kGlobal ? "global" : "utterance";
}

std::string CmvnStatsToJson(const CmvnStats &stats) {
  nlohmann::json j;
  j["mean"] = stats.mean;
  j["variance"] = stats.variance;
  j["source"] = ToString(stats.source);
  return j.dump(2) + "\n";
}

CmvnStats CmvnStatsFromJson(const std::string &text) {
  CmvnStats stats;
  try {
    const auto j = nlohmann::json::parse(text);
    stats.mean = j.at("mean").get<std::vector<double>>();
    stats.variance = j.at("variance").get<std::vector<double>>();
    const auto src = j.at("source").get<std::string>();
    if (src == "utterance") {
      stats.source = CmvnSource::kUtterance;
    } else if (src == "global") {
      stats.source = CmvnSource::kGlobal;
    } else {
      throw std::runtime_error("unknown CMVN source '" + src + "'");
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed CMVN stats: ") + e.what());
  }
  if (stats.mean.empty() || stats.mean.size() != stats.variance.size()) {
    throw std::runtime_error("CMVN stats mean/variance sizes disagree");
  }
  for (double v : stats.variance) {
    if (!(v > 0.0)) throw std::runtime_error("CMVN variance must be positive");
  }
  return stats;
}

void WriteCmvnStats(const CmvnStats &stats, const std::filesystem::path &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << CmvnStatsToJson(stats);
}

CmvnStats ReadCmvnStats(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return CmvnStatsFromJson(ss.str());
}

}  // namespace simulst
