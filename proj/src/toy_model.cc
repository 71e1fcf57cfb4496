// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/toy_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "simulst/text_util.h"

namespace simulst {

namespace {

constexpr double kOffMass = 1e-6;
constexpr double kGridTolerance = 1e-9;
const std::string kWordMarker = "\xe2\x96\x81";  // U+2581

bool OnGrid(double ms, double frame_ms) {
  const double frames = ms / frame_ms;
  return std::abs(frames - std::round(frames)) < kGridTolerance;
}

std::size_t EndFrame(const ScriptWord &w, double frame_ms) {
  return static_cast<std::size_t>(std::llround(w.end_ms / frame_ms));
}

std::string SourceToken(const ScriptWord &w) { return kWordMarker + w.text; }

CtcPosterior EncodeWithVocab(const Script &script, const Vocabulary &vocab,
                             double consumed_ms) {
  const double capped = std::clamp(consumed_ms, 0.0, script.total_ms);
  const auto frames =
      static_cast<std::size_t>(std::floor(capped / script.frame_ms + kGridTolerance));
  const std::size_t v = vocab.Size();
  const double on = std::log1p(-kOffMass);
  const double off = std::log(kOffMass / static_cast<double>(v - 1));

  std::vector<TokenId> labels(frames, kBlankId);
  for (const auto &w : script.words) {
    const std::size_t f = EndFrame(w, script.frame_ms) - 1;
    if (f < frames) labels[f] = vocab.Find(SourceToken(w));
  }
  FeatureMatrix logprobs(frames, v, off);
  for (std::size_t t = 0; t < frames; ++t) logprobs(t, labels[t]) = on;
  return CtcPosterior(vocab, std::move(logprobs));
}

}  // namespace

void Script::Validate() const {
  auto fail = [&](const std::string &msg) {
    throw std::invalid_argument("script '" + id + "': " + msg);
  };
  if (frame_ms != kFrameDurationMs) fail("only 10 ms frames are supported");
  if (!(total_ms > 0.0) || !OnGrid(total_ms, frame_ms)) {
    fail("total_ms must be a positive multiple of frame_ms");
  }
  if (encode_cost_ms < 0.0 || decode_cost_ms < 0.0) fail("costs must be >= 0");
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto &w = words[i];
    if (w.text.empty()) fail("word " + std::to_string(i) + " has no text");
    if (!(w.end_ms > 0.0) || !OnGrid(w.end_ms, frame_ms)) {
      fail("end_ms of word " + std::to_string(i) + " must be a positive multiple of frame_ms");
    }
    if (w.end_ms > total_ms) fail("word " + std::to_string(i) + " ends after total_ms");
    if (i > 0) {
      const std::size_t prev = EndFrame(words[i - 1], frame_ms);
      const std::size_t cur = EndFrame(w, frame_ms);
      if (cur <= prev) fail("boundary times must be strictly increasing");
      // Equal tokens on adjacent frames would collapse into one word.
      if (cur == prev + 1 && words[i - 1].text == w.text) {
        fail("repeated word '" + w.text + "' needs a blank frame in between");
      }
    }
  }
}

std::size_t Script::TotalFrames() const {
  return static_cast<std::size_t>(std::llround(total_ms / frame_ms));
}

std::vector<std::string> Script::FullTarget() const {
  std::vector<std::string> out;
  for (const auto &w : words) out.insert(out.end(), w.target.begin(), w.target.end());
  return out;
}

std::string Script::ReferenceText() const {
  std::string joined;
  for (const auto &piece : FullTarget()) joined += piece;
  std::string out;
  std::size_t pos = 0;
  while (pos < joined.size()) {
    if (joined.compare(pos, kWordMarker.size(), kWordMarker) == 0) {
      out += ' ';
      pos += kWordMarker.size();
    } else {
      out += joined[pos++];
    }
  }
  std::string norm;
  for (const auto &w : SplitWhitespace(out)) norm += (norm.empty() ? "" : " ") + w;
  return norm;
}

std::size_t Script::RevealedWords(double consumed_ms) const {
  std::size_t n = 0;
  while (n < words.size() && words[n].end_ms <= consumed_ms + kGridTolerance) ++n;
  return n;
}

Script ScriptFromJson(const std::string &text) {
  Script s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.id = j.at("id").get<std::string>();
    s.frame_ms = j.value("frame_ms", kFrameDurationMs);
    s.encode_cost_ms = j.value("encode_cost_ms", 0.0);
    s.decode_cost_ms = j.value("decode_cost_ms", 0.0);
    for (const auto &w : j.at("words")) {
      ScriptWord word;
      word.text = w.at("text").get<std::string>();
      word.end_ms = w.at("end_ms").get<double>();
      word.target = w.at("target").get<std::vector<std::string>>();
      s.words.push_back(std::move(word));
    }
    s.total_ms = j.contains("total_ms") ? j["total_ms"].get<double>()
                 : s.words.empty()      ? 0.0
                                        : s.words.back().end_ms;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed toy script: ") + e.what());
  }
  s.Validate();
  return s;
}

std::string ScriptToJson(const Script &script) {
  nlohmann::ordered_json j;
  j["id"] = script.id;
  j["frame_ms"] = script.frame_ms;
  j["total_ms"] = script.total_ms;
  j["encode_cost_ms"] = script.encode_cost_ms;
  j["decode_cost_ms"] = script.decode_cost_ms;
  j["words"] = nlohmann::ordered_json::array();
  for (const auto &w : script.words) {
    j["words"].push_back({{"text", w.text}, {"end_ms", w.end_ms}, {"target", w.target}});
  }
  return j.dump(2) + "\n";
}

Script ReadScript(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open toy script " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  try {
    return ScriptFromJson(ss.str());
  } catch (const std::exception &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::vector<Script> LoadScripts(const std::filesystem::path &path) {
  namespace fs = std::filesystem;
  if (!fs::exists(path)) throw std::runtime_error("toy script path not found: " + path.string());
  std::vector<Script> scripts;
  if (fs::is_directory(path)) {
    for (const auto &entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".json") scripts.push_back(ReadScript(entry.path()));
    }
    std::sort(scripts.begin(), scripts.end(),
              [](const Script &a, const Script &b) { return a.id < b.id; });
  } else {
    scripts.push_back(ReadScript(path));
  }
  return scripts;
}

Vocabulary ScriptVocabulary(const Script &script) {
  std::vector<std::string> pieces = {"<blk>"};
  for (const auto &w : script.words) {
    const auto token = SourceToken(w);
    if (std::find(pieces.begin(), pieces.end(), token) == pieces.end()) {
      pieces.push_back(token);
    }
  }
  // Keep V >= 2 for word-less scripts.
  if (pieces.size() == 1) pieces.push_back(kWordMarker);
  return Vocabulary::FromPieces(std::move(pieces));
}

FeatureMatrix ScriptAudio(const Script &script) {
  return FeatureMatrix(script.TotalFrames(), 1, 0.0);
}

CtcPosterior ToyEncodePrefix(const Script &script, double consumed_ms) {
  return EncodeWithVocab(script, ScriptVocabulary(script), consumed_ms);
}

std::optional<std::string> ToyDecodeNext(const Script &script, double consumed_ms,
                                         std::span<const std::string> emitted) {
  std::size_t visible = 0;
  const std::size_t revealed = script.RevealedWords(consumed_ms);
  for (std::size_t i = 0; i < revealed; ++i) {
    const auto &target = script.words[i].target;
    if (emitted.size() < visible + target.size()) {
      return target[emitted.size() - visible];
    }
    visible += target.size();
  }
  return std::nullopt;
}

ToyModel::ToyModel(Script script, FakeClock *clock)
    : script_(std::move(script)), clock_(clock) {
  script_.Validate();
}

CtcPosterior ToyModel::EncodePrefix(const FeatureView &prefix) {
  ++encode_calls_;
  if (clock_) clock_->Advance(script_.encode_cost_ms);
  return ToyEncodePrefix(script_, prefix.Frames() * script_.frame_ms);
}

std::optional<std::string> ToyModel::DecodeNext(const FeatureView &prefix,
                                                std::span<const std::string> emitted) {
  ++decode_calls_;
  if (clock_) clock_->Advance(script_.decode_cost_ms);
  return ToyDecodeNext(script_, prefix.Frames() * script_.frame_ms, emitted);
}

}  // namespace simulst
