// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_CTC_H_
#define SIMULST_CTC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "simulst/features.h"

namespace simulst {

using TokenId = std::int32_t;

inline constexpr TokenId kBlankId = 0;
// Label carried by vectors whose source frames had no single CTC label.
inline constexpr TokenId kUnlabeled = -1;

// Token inventory with a blank at index 0. `begins_word` marks subword
// units that open a new word (the "▁" marker of sentencepiece models).
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> tokens, std::vector<bool> begins_word);

  // token 0 is "<blk>"; every other token begins a word.
  static Vocabulary WordLevel(std::size_t size);
  // Derives begins_word from a leading "▁" on each piece. pieces[0] is blank.
  static Vocabulary FromPieces(std::vector<std::string> pieces);

  std::size_t Size() const { return tokens_.size(); }
  TokenId BlankId() const { return kBlankId; }
  bool BeginsWord(TokenId id) const { return begins_word_.at(id); }
  const std::string &Token(TokenId id) const { return tokens_.at(id); }
  TokenId Find(const std::string &token) const;  // -1 when absent

 private:
  std::vector<std::string> tokens_;
  std::vector<bool> begins_word_;
};

// T x V matrix of per-frame log-probabilities. Every row is a normalized
// distribution (log-sum-exp within 1e-4 of zero).
class CtcPosterior {
 public:
  CtcPosterior(Vocabulary vocab, FeatureMatrix logprobs);

  std::size_t Frames() const { return logprobs_.Frames(); }
  const Vocabulary &Vocab() const { return vocab_; }
  const FeatureMatrix &LogProbs() const { return logprobs_; }
  double LogProb(std::size_t t, TokenId v) const { return logprobs_(t, v); }

 private:
  Vocabulary vocab_;
  FeatureMatrix logprobs_;
};

using LabelSequence = std::vector<TokenId>;

struct CompressedSequence {
  FeatureMatrix vectors;
  std::vector<TokenId> group_labels;
  std::vector<std::size_t> group_sizes;

  std::size_t Size() const { return group_sizes.size(); }
};

enum class CompressionMode { kFixed, kCtcDriven };

// The first `n_epochs_fixed` epochs use fixed 4-frame averaging; later
// epochs switch to CTC-driven compression.
struct CompressionSchedule {
  std::size_t n_epochs_fixed = 10;
  std::size_t fixed_group = 4;
};

// Per-frame argmax; ties go to the lowest token index.
LabelSequence GreedyLabels(const CtcPosterior &post);

// Merges consecutive duplicates, then drops blanks.
LabelSequence Collapse(const LabelSequence &frames, const Vocabulary &vocab);

// -log p(target | post) summed over all CTC alignments. Returns +infinity
// when the target cannot be aligned in post.Frames() frames.
double CtcForwardLoss(const CtcPosterior &post, const LabelSequence &target);

// Averages each run of frames sharing a greedy label into one vector.
CompressedSequence CtcCompress(const FeatureMatrix &states, const CtcPosterior &post);

// If seq is longer than floor(max_input_len / 4), averages consecutive blocks
// of the smallest factor f that brings it under that threshold.
CompressedSequence MaxOutputLengthMerge(const CompressedSequence &seq,
                                        std::size_t max_input_len);
std::size_t MaxOutputLengthFactor(std::size_t length, std::size_t max_input_len);

CompressedSequence FixedCompress(const FeatureMatrix &states, std::size_t group = 4);

CompressionMode ScheduleMode(const CompressionSchedule &sched, std::size_t epoch);

// Compression as applied during training at `epoch`: fixed averaging while
// the schedule says so, otherwise CTC compression followed by the length cap.
CompressedSequence CompressForEpoch(const FeatureMatrix &states,
                                    const CtcPosterior &post,
                                    const CompressionSchedule &sched,
                                    std::size_t epoch, std::size_t max_input_len);

// Number of word-initial tokens in the collapsed greedy output.
std::size_t CountWords(const CtcPosterior &post);

}  // namespace simulst

#endif  // SIMULST_CTC_H_
