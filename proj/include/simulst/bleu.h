// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_BLEU_H_
#define SIMULST_BLEU_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simulst {

inline constexpr std::size_t kBleuMaxOrder = 4;
inline constexpr std::string_view kBleuSignature =
    "BLEU+case.mixed+smooth.exp+tok.13a+version.1.5.1";

// mteval-v13a tokenization: unescapes the four common HTML entities, pads
// punctuation and symbols with spaces, splits periods and commas off unless
// they sit between digits, separates a dash that follows a digit. Case is
// preserved.
std::vector<std::string> Tokenize13a(std::string_view text);

struct BleuScore {
  double score = 0.0;  // [0, 100]
  std::array<double, kBleuMaxOrder> precisions{};  // smoothed, in [0, 1]
  std::array<std::size_t, kBleuMaxOrder> correct{};
  std::array<std::size_t, kBleuMaxOrder> total{};
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Mergeable clipped n-gram statistics for one or more sentence pairs.
struct BleuStats {
  std::array<std::size_t, kBleuMaxOrder> correct{};
  std::array<std::size_t, kBleuMaxOrder> total{};
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  void Add(std::string_view hyp, std::string_view ref);
  void Merge(const BleuStats &other);
};

// Exponential smoothing: the k-th order whose match count is zero gets
// precision 1 / (2^k * total).
// Without effective order an order with no hypothesis n-grams zeroes the
// score; with it, such orders leave the geometric mean.
BleuScore ScoreFromStats(const BleuStats &stats, bool effective_order = false);

// Single-reference corpus BLEU.
BleuScore CorpusBleu(std::span<const std::string> hyps, std::span<const std::string> refs);

// Single-pair BLEU with effective order.
BleuScore SentenceBleu(std::string_view hyp, std::string_view ref);

}  // namespace simulst

#endif  // SIMULST_BLEU_H_
