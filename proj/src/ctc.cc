// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/ctc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace simulst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNormTolerance = 1e-4;
const char kWordMarker[] = "\xe2\x96\x81";  // U+2581

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Averages rows [begin, end) of `m` into `out`.
void AppendMean(const FeatureMatrix &m, std::size_t begin, std::size_t end,
                FeatureMatrix *out) {
  std::vector<double> acc(m.Dim(), 0.0);
  for (std::size_t t = begin; t < end; ++t) {
    const auto row = m.Row(t);
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += row[d];
  }
  const double n = static_cast<double>(end - begin);
  for (double &v : acc) v /= n;
  out->AppendRow(acc);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<bool> begins_word)
    : tokens_(std::move(tokens)), begins_word_(std::move(begins_word)) {
  if (tokens_.size() < 2) throw std::invalid_argument("vocabulary needs V >= 2");
  if (tokens_.size() != begins_word_.size()) {
    throw std::invalid_argument("vocabulary begins_word size mismatch");
  }
  begins_word_[kBlankId] = false;
}

Vocabulary Vocabulary::WordLevel(std::size_t size) {
  std::vector<std::string> tokens(size);
  std::vector<bool> begins(size, true);
  if (size > 0) tokens[0] = "<blk>";
  for (std::size_t i = 1; i < size; ++i) tokens[i] = std::to_string(i);
  return Vocabulary(std::move(tokens), std::move(begins));
}

Vocabulary Vocabulary::FromPieces(std::vector<std::string> pieces) {
  std::vector<bool> begins(pieces.size(), false);
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    begins[i] = pieces[i].rfind(kWordMarker, 0) == 0;
  }
  return Vocabulary(std::move(pieces), std::move(begins));
}

TokenId Vocabulary::Find(const std::string &token) const {
  const auto it = std::find(tokens_.begin(), tokens_.end(), token);
  return it == tokens_.end() ? -1 : static_cast<TokenId>(it - tokens_.begin());
}

CtcPosterior::CtcPosterior(Vocabulary vocab, FeatureMatrix logprobs)
    : vocab_(std::move(vocab)), logprobs_(std::move(logprobs)) {
  if (logprobs_.Dim() != vocab_.Size()) {
    throw std::invalid_argument("posterior has " + std::to_string(logprobs_.Dim()) +
                                " columns but vocabulary size is " +
                                std::to_string(vocab_.Size()));
  }
  for (std::size_t t = 0; t < logprobs_.Frames(); ++t) {
    double lse = kNegInf;
    for (double v : logprobs_.Row(t)) lse = LogAdd(lse, v);
    if (!(std::abs(lse) <= kNormTolerance)) {
      throw std::invalid_argument("posterior row " + std::to_string(t) +
                                  " is not normalized (log-sum-exp " +
                                  std::to_string(lse) + ")");
    }
  }
}

LabelSequence GreedyLabels(const CtcPosterior &post) {
  LabelSequence labels(post.Frames());
  for (std::size_t t = 0; t < post.Frames(); ++t) {
    const auto row = post.LogProbs().Row(t);
    // max_element keeps the first of equal maxima.
    labels[t] = static_cast<TokenId>(std::max_element(row.begin(), row.end()) -
                                     row.begin());
  }
  return labels;
}

LabelSequence Collapse(const LabelSequence &frames, const Vocabulary &vocab) {
  LabelSequence out;
  TokenId prev = kUnlabeled;
  for (TokenId y : frames) {
    if (y != prev && y != vocab.BlankId()) out.push_back(y);
    prev = y;
  }
  return out;
}

double CtcForwardLoss(const CtcPosterior &post, const LabelSequence &target) {
  const TokenId blank = post.Vocab().BlankId();
  for (TokenId y : target) {
    if (y == blank) throw std::invalid_argument("CTC target contains blank");
    if (y < 0 || static_cast<std::size_t>(y) >= post.Vocab().Size()) {
      throw std::invalid_argument("CTC target label out of range");
    }
  }
  const std::size_t frames = post.Frames();
  const std::size_t label_len = target.size();

  std::size_t repeats = 0;
  for (std::size_t i = 1; i < label_len; ++i) repeats += target[i] == target[i - 1];
  if (frames == 0) {
    return label_len == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (label_len + repeats > frames) return std::numeric_limits<double>::infinity();

  // Blank-interleaved target: b y1 b y2 ... yL b
  const std::size_t states = 2 * label_len + 1;
  std::vector<TokenId> ext(states, blank);
  for (std::size_t i = 0; i < label_len; ++i) ext[2 * i + 1] = target[i];

  std::vector<double> alpha(states, kNegInf), next(states, kNegInf);
  alpha[0] = post.LogProb(0, ext[0]);
  if (states > 1) alpha[1] = post.LogProb(0, ext[1]);

  for (std::size_t t = 1; t < frames; ++t) {
    for (std::size_t s = 0; s < states; ++s) {
      double a = alpha[s];
      if (s >= 1) a = LogAdd(a, alpha[s - 1]);
      if (s >= 2 && ext[s] != blank && ext[s] != ext[s - 2]) {
        a = LogAdd(a, alpha[s - 2]);
      }
      next[s] = a == kNegInf ? kNegInf : a + post.LogProb(t, ext[s]);
    }
    std::swap(alpha, next);
  }

  double total = alpha[states - 1];
  if (states >= 2) total = LogAdd(total, alpha[states - 2]);
  return -total;
}

CompressedSequence CtcCompress(const FeatureMatrix &states,
                               const CtcPosterior &post) {
  if (states.Frames() != post.Frames()) {
    throw std::invalid_argument("CTC compression: " + std::to_string(states.Frames()) +
                                " state frames vs " + std::to_string(post.Frames()) +
                                " posterior frames");
  }
  const LabelSequence labels = GreedyLabels(post);
  CompressedSequence out{FeatureMatrix(0, states.Dim()), {}, {}};
  std::size_t begin = 0;
  for (std::size_t t = 1; t <= labels.size(); ++t) {
    if (t == labels.size() || labels[t] != labels[begin]) {
      AppendMean(states, begin, t, &out.vectors);
      out.group_labels.push_back(labels[begin]);
      out.group_sizes.push_back(t - begin);
      begin = t;
    }
  }
  return out;
}

std::size_t MaxOutputLengthFactor(std::size_t length, std::size_t max_input_len) {
  if (max_input_len < 4) {
    throw std::invalid_argument("max_input_len must be >= 4");
  }
  const std::size_t threshold = max_input_len / 4;
  if (length <= threshold) return 1;
  return (length + threshold - 1) / threshold;
}

CompressedSequence MaxOutputLengthMerge(const CompressedSequence &seq,
                                        std::size_t max_input_len) {
  const std::size_t factor = MaxOutputLengthFactor(seq.Size(), max_input_len);
  if (factor == 1) return seq;

  CompressedSequence out{FeatureMatrix(0, seq.vectors.Dim()), {}, {}};
  for (std::size_t begin = 0; begin < seq.Size(); begin += factor) {
    const std::size_t end = std::min(begin + factor, seq.Size());
    AppendMean(seq.vectors, begin, end, &out.vectors);
    std::size_t size = 0;
    TokenId label = seq.group_labels[begin];
    for (std::size_t i = begin; i < end; ++i) {
      size += seq.group_sizes[i];
      if (seq.group_labels[i] != label) label = kUnlabeled;
    }
    out.group_labels.push_back(label);
    out.group_sizes.push_back(size);
  }
  return out;
}

CompressedSequence FixedCompress(const FeatureMatrix &states, std::size_t group) {
  if (group == 0) throw std::invalid_argument("fixed compression group must be >= 1");
  CompressedSequence out{FeatureMatrix(0, states.Dim()), {}, {}};
  for (std::size_t begin = 0; begin < states.Frames(); begin += group) {
    const std::size_t end = std::min(begin + group, states.Frames());
    AppendMean(states, begin, end, &out.vectors);
    out.group_labels.push_back(kUnlabeled);
    out.group_sizes.push_back(end - begin);
  }
  return out;
}

CompressionMode ScheduleMode(const CompressionSchedule &sched, std::size_t epoch) {
  return epoch < sched.n_epochs_fixed ? CompressionMode::kFixed
                                      : CompressionMode::kCtcDriven;
}

CompressedSequence CompressForEpoch(const FeatureMatrix &states,
                                    const CtcPosterior &post,
                                    const CompressionSchedule &sched,
                                    std::size_t epoch, std::size_t max_input_len) {
  if (ScheduleMode(sched, epoch) == CompressionMode::kFixed) {
    return FixedCompress(states, sched.fixed_group);
  }
  return MaxOutputLengthMerge(CtcCompress(states, post), max_input_len);
}

std::size_t CountWords(const CtcPosterior &post) {
  const auto tokens = Collapse(GreedyLabels(post), post.Vocab());
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(),
                    [&](TokenId y) { return post.Vocab().BeginsWord(y); }));
}

}  // namespace simulst
