// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_SIMUL_POLICY_H_
#define SIMULST_SIMUL_POLICY_H_

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "simulst/ctc.h"
#include "simulst/features.h"

namespace simulst {

// Monotonic millisecond time source, injected so computation-aware
// latency can be tested deterministically.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double NowMs() = 0;
};

class SteadyClock : public Clock {
 public:
  double NowMs() override {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }
};

// Advances only when told to.
class FakeClock : public Clock {
 public:
  double NowMs() override { return now_ms_; }
  void Advance(double ms) { now_ms_ += ms; }

 private:
  double now_ms_ = 0.0;
};

// What a host model supplies to the simultaneous session. Both calls see
// only the audio consumed so far and must be deterministic for a fixed
// prefix; a longer prefix may only extend the posterior.
class TranslationModel {
 public:
  virtual ~TranslationModel() = default;

  virtual CtcPosterior EncodePrefix(const FeatureView &prefix) = 0;

  // Next greedy target token, or nullopt for end of sequence.
  virtual std::optional<std::string> DecodeNext(const FeatureView &prefix,
                                                std::span<const std::string> emitted) = 0;
};

// Target tokens opening a word carry the sentencepiece "▁" marker.
bool BeginsTargetWord(std::string_view token);

struct StreamConfig {
  double segment_ms = 320.0;
  std::size_t k = 1;
  std::size_t max_output_tokens = 512;

  void Validate() const;
};

struct TraceEvent {
  std::string token;
  double source_delay_ms = 0.0;
  double wallclock_delay_ms = 0.0;

  bool operator==(const TraceEvent &) const = default;
};

struct SimulTrace {
  std::vector<TraceEvent> events;

  std::vector<double> SourceDelays() const;
  std::vector<double> WallclockDelays() const;
  std::vector<std::string> Tokens() const;
};

struct SessionState {
  double consumed_ms = 0.0;
  std::size_t detected_src_words = 0;
  std::vector<std::string> emitted_tokens;
  std::size_t emitted_words = 0;
  bool finished_source = false;
  bool finished = false;
  // A WRITE decision stays open until it emits a word-initial token.
  bool writing = false;
  // Cumulative time spent inside model calls, per the injected clock.
  double compute_ms = 0.0;
  SimulTrace trace;
};

enum class ActionKind { kRead, kWrite, kFinish };

struct Action {
  ActionKind kind = ActionKind::kRead;
  std::string token;  // set for kWrite
};

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wait-k with adaptive word detection. Source words are counted from the
// CTC output of the consumed prefix after every READ of segment_ms audio.
// A WRITE decision is taken when detected >= emitted_words + k or the
// source is exhausted, and emits tokens up to and including the next
// word-initial one. Each event's wallclock delay is consumed audio time
// plus the model time spent so far.
class SimulSession {
 public:
  SimulSession(const StreamConfig &cfg, TranslationModel &model,
               const FeatureMatrix &audio, Clock &clock);

  Action Step();

  const SessionState &State() const { return state_; }
  bool Finished() const { return state_.finished; }
  double TotalMs() const { return audio_.DurationMs(); }

 private:
  FeatureView ConsumedPrefix() const;
  void Read();
  std::optional<std::string> Decode();
  [[noreturn]] void Fail(const char *call, const std::exception &e) const;

  StreamConfig cfg_;
  TranslationModel &model_;
  const FeatureMatrix &audio_;
  Clock &clock_;
  SessionState state_;
};

SimulTrace RunSession(const StreamConfig &cfg, TranslationModel &model,
                      const FeatureMatrix &audio, Clock &clock);

}  // namespace simulst

#endif  // SIMULST_SIMUL_POLICY_H_
