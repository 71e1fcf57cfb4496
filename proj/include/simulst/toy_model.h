// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_TOY_MODEL_H_
#define SIMULST_TOY_MODEL_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simulst/ctc.h"
#include "simulst/features.h"
#include "simulst/simul_policy.h"

namespace simulst {

struct ScriptWord {
  std::string text;
  double end_ms = 0.0;
  std::vector<std::string> target;  // target pieces this word maps to
};

// A scripted utterance. Word i becomes visible to the encoder once end_ms
// of audio has been consumed; decoding replays the concatenated targets of
// the visible words.
struct Script {
  std::string id;
  double frame_ms = kFrameDurationMs;
  double total_ms = 0.0;
  double encode_cost_ms = 0.0;  // charged to a FakeClock per encoder call
  double decode_cost_ms = 0.0;  // charged to a FakeClock per decoder call
  std::vector<ScriptWord> words;

  void Validate() const;
  std::size_t TotalFrames() const;
  std::vector<std::string> FullTarget() const;
  // Space-joined target words, "▁" markers removed.
  std::string ReferenceText() const;
  std::size_t RevealedWords(double consumed_ms) const;
};

Script ScriptFromJson(const std::string &text);
std::string ScriptToJson(const Script &script);
Script ReadScript(const std::filesystem::path &path);
// A single script file, or every *.json in a directory sorted by id.
std::vector<Script> LoadScripts(const std::filesystem::path &path);

// Blank plus one "▁<text>" token per distinct source word.
Vocabulary ScriptVocabulary(const Script &script);

// Zero-valued 1-dim features spanning the script's duration.
FeatureMatrix ScriptAudio(const Script &script);

// Near-one-hot posterior (1 - 1e-6 on the chosen label) over the first
// floor(consumed_ms / frame_ms) frames. Word i's token sits on the last
// frame before its boundary; every other frame is blank.
CtcPosterior ToyEncodePrefix(const Script &script, double consumed_ms);

// Next token of the visible target or nullopt once it is exhausted.
std::optional<std::string> ToyDecodeNext(const Script &script, double consumed_ms,
                                         std::span<const std::string> emitted);

class ToyModel : public TranslationModel {
 public:
  // `clock`, when given, is advanced by the script's per-call costs.
  explicit ToyModel(Script script, FakeClock *clock = nullptr);

  CtcPosterior EncodePrefix(const FeatureView &prefix) override;
  std::optional<std::string> DecodeNext(const FeatureView &prefix,
                                        std::span<const std::string> emitted) override;

  const Script &GetScript() const { return script_; }
  std::size_t EncodeCalls() const { return encode_calls_; }
  std::size_t DecodeCalls() const { return decode_calls_; }

 private:
  Script script_;
  FakeClock *clock_;
  std::size_t encode_calls_ = 0;
  std::size_t decode_calls_ = 0;
};

}  // namespace simulst

#endif  // SIMULST_TOY_MODEL_H_
