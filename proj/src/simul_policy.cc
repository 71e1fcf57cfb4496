// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/simul_policy.h"

#include <algorithm>
#include <cmath>

#include "simulst/text_util.h"

namespace simulst {

namespace {

constexpr std::string_view kWordMarker = "\xe2\x96\x81";  // U+2581

}  // namespace

bool BeginsTargetWord(std::string_view token) {
  return token.substr(0, kWordMarker.size()) == kWordMarker;
}

void StreamConfig::Validate() const {
  if (!(segment_ms > 0.0)) throw std::invalid_argument("segment_ms must be > 0");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (max_output_tokens < 1) throw std::invalid_argument("max_output_tokens must be >= 1");
}

std::vector<double> SimulTrace::SourceDelays() const {
  std::vector<double> out;
  out.reserve(events.size());
  for (const auto &e : events) out.push_back(e.source_delay_ms);
  return out;
}

std::vector<double> SimulTrace::WallclockDelays() const {
  std::vector<double> out;
  out.reserve(events.size());
  for (const auto &e : events) out.push_back(e.wallclock_delay_ms);
  return out;
}

std::vector<std::string> SimulTrace::Tokens() const {
  std::vector<std::string> out;
  out.reserve(events.size());
  for (const auto &e : events) out.push_back(e.token);
  return out;
}

SimulSession::SimulSession(const StreamConfig &cfg, TranslationModel &model,
                           const FeatureMatrix &audio, Clock &clock)
    : cfg_(cfg), model_(model), audio_(audio), clock_(clock) {
  cfg_.Validate();
  if (audio_.Empty()) throw std::invalid_argument("simultaneous session needs audio");
}

FeatureView SimulSession::ConsumedPrefix() const {
  const double frames = state_.consumed_ms / audio_.FrameDurationMs();
  const auto n = static_cast<std::size_t>(std::floor(frames + 1e-9));
  return audio_.Prefix(std::min(n, audio_.Frames()));
}

void SimulSession::Fail(const char *call, const std::exception &e) const {
  throw SessionError(std::string(call) + " failed at consumed_ms=" +
                     FormatDouble(state_.consumed_ms) + " after " +
                     std::to_string(state_.emitted_tokens.size()) +
                     " emitted tokens: " + e.what());
}

void SimulSession::Read() {
  state_.consumed_ms = std::min(TotalMs(), state_.consumed_ms + cfg_.segment_ms);
  if (state_.consumed_ms >= TotalMs()) state_.finished_source = true;
  const double start = clock_.NowMs();
  try {
    state_.detected_src_words = CountWords(model_.EncodePrefix(ConsumedPrefix()));
  } catch (const std::exception &e) {
    Fail("encode_prefix", e);
  }
  state_.compute_ms += clock_.NowMs() - start;
}

std::optional<std::string> SimulSession::Decode() {
  const double start = clock_.NowMs();
  std::optional<std::string> token;
  try {
    token = model_.DecodeNext(ConsumedPrefix(), state_.emitted_tokens);
  } catch (const std::exception &e) {
    Fail("decode_next", e);
  }
  state_.compute_ms += clock_.NowMs() - start;
  return token;
}

Action SimulSession::Step() {
  if (state_.finished) throw std::logic_error("step on a finished session");

  if (state_.emitted_tokens.size() >= cfg_.max_output_tokens) {
    state_.finished = true;
    return {ActionKind::kFinish, {}};
  }

  const bool write = state_.finished_source || state_.writing ||
                     state_.detected_src_words >= state_.emitted_words + cfg_.k;
  if (!write) {
    Read();
    return {ActionKind::kRead, {}};
  }

  auto token = Decode();
  if (!token) {
    if (state_.finished_source) {
      state_.finished = true;
      return {ActionKind::kFinish, {}};
    }
    // End of sequence before the source is exhausted only means the model
    // has nothing more to say yet.
    state_.writing = false;
    Read();
    return {ActionKind::kRead, {}};
  }

  state_.trace.events.push_back(
      {*token, state_.consumed_ms, state_.consumed_ms + state_.compute_ms});
  state_.emitted_tokens.push_back(*token);
  if (BeginsTargetWord(*token)) {
    ++state_.emitted_words;
    state_.writing = false;
  } else {
    state_.writing = true;
  }
  return {ActionKind::kWrite, std::move(*token)};
}

SimulTrace RunSession(const StreamConfig &cfg, TranslationModel &model,
                      const FeatureMatrix &audio, Clock &clock) {
  SimulSession session(cfg, model, audio, clock);
  while (session.Step().kind != ActionKind::kFinish) {
  }
  return session.State().trace;
}

}  // namespace simulst
