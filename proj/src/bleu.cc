// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "simulst/text_util.h"

namespace simulst {

namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool IsPaddedSymbol(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 0x7b && u <= 0x7e) || (u >= 0x5b && u <= 0x60) ||
         (u >= 0x20 && u <= 0x26) || (u >= 0x28 && u <= 0x2b) ||
         (u >= 0x3a && u <= 0x40) || u == '/';
}

bool IsPeriodComma(char c) { return c == '.' || c == ','; }

void ReplaceAll(std::string *s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s->find(from, pos)) != std::string::npos) {
    s->replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Each pass mirrors one left-to-right, non-overlapping regex substitution.
std::string PadSymbols(const std::string &s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char c : s) {
    if (IsPaddedSymbol(c)) {
      out += ' ';
      out += c;
      out += ' ';
    } else {
      out += c;
    }
  }
  return out;
}

// ([^0-9])([\.,]) -> "\1 \2 "
std::string SplitTrailingPunct(const std::string &s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && !IsDigit(s[i]) && IsPeriodComma(s[i + 1])) {
      out += s[i];
      out += ' ';
      out += s[i + 1];
      out += ' ';
      i += 2;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([\.,])([^0-9]) -> " \1 \2"
std::string SplitLeadingPunct(const std::string &s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && IsPeriodComma(s[i]) && !IsDigit(s[i + 1])) {
      out += ' ';
      out += s[i];
      out += ' ';
      out += s[i + 1];
      i += 2;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// ([0-9])(-) -> "\1 \2 "
std::string SplitDigitDash(const std::string &s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && IsDigit(s[i]) && s[i + 1] == '-') {
      out += s[i];
      out += " - ";
      i += 2;
    } else {
      out += s[i++];
    }
  }
  return out;
}

using NgramCounts = std::map<std::string, std::size_t>;

std::array<NgramCounts, kBleuMaxOrder> CountNgrams(const std::vector<std::string> &tokens) {
  std::array<NgramCounts, kBleuMaxOrder> counts;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string key;
    for (std::size_t n = 0; n < kBleuMaxOrder && i + n < tokens.size(); ++n) {
      if (n) key += '\x1f';
      key += tokens[i + n];
      ++counts[n][key];
    }
  }
  return counts;
}

}  // namespace

std::vector<std::string> Tokenize13a(std::string_view text) {
  std::string s(text);
  ReplaceAll(&s, "<skipped>", "");
  ReplaceAll(&s, "-\n", "");
  ReplaceAll(&s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    ReplaceAll(&s, "&quot;", "\"");
    ReplaceAll(&s, "&amp;", "&");
    ReplaceAll(&s, "&lt;", "<");
    ReplaceAll(&s, "&gt;", ">");
  }
  s = " " + s + " ";
  s = SplitDigitDash(SplitLeadingPunct(SplitTrailingPunct(PadSymbols(s))));
  return SplitWhitespace(s);
}

void BleuStats::Add(std::string_view hyp, std::string_view ref) {
  const auto hyp_tokens = Tokenize13a(hyp);
  const auto ref_tokens = Tokenize13a(ref);
  hyp_len += hyp_tokens.size();
  ref_len += ref_tokens.size();
  const auto hyp_counts = CountNgrams(hyp_tokens);
  const auto ref_counts = CountNgrams(ref_tokens);
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    for (const auto &[gram, count] : hyp_counts[n]) {
      total[n] += count;
      const auto it = ref_counts[n].find(gram);
      if (it != ref_counts[n].end()) correct[n] += std::min(count, it->second);
    }
  }
}

void BleuStats::Merge(const BleuStats &other) {
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    correct[n] += other.correct[n];
    total[n] += other.total[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
}

BleuScore ScoreFromStats(const BleuStats &stats, bool effective_order) {
  BleuScore s;
  s.correct = stats.correct;
  s.total = stats.total;
  s.hyp_len = stats.hyp_len;
  s.ref_len = stats.ref_len;

  double smooth = 1.0;
  std::size_t order = 0;
  bool missing_order = false;
  for (std::size_t n = 0; n < kBleuMaxOrder; ++n) {
    if (stats.total[n] == 0) {
      missing_order = true;
      break;
    }
    order = n + 1;
    if (stats.correct[n] == 0) {
      smooth *= 2.0;
      s.precisions[n] = 1.0 / (smooth * static_cast<double>(stats.total[n]));
    } else {
      s.precisions[n] = static_cast<double>(stats.correct[n]) /
                        static_cast<double>(stats.total[n]);
    }
  }

  if (stats.hyp_len < stats.ref_len) {
    s.brevity_penalty =
        stats.hyp_len > 0 ? std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                               static_cast<double>(stats.hyp_len))
                          : 0.0;
  }
  if (order == 0 || s.brevity_penalty == 0.0 || (missing_order && !effective_order)) {
    s.score = 0.0;
    return s;
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < order; ++n) log_sum += std::log(s.precisions[n]);
  s.score = 100.0 * s.brevity_penalty * std::exp(log_sum / static_cast<double>(order));
  return s;
}

BleuScore CorpusBleu(std::span<const std::string> hyps, std::span<const std::string> refs) {
  if (hyps.size() != refs.size()) {
    throw std::invalid_argument("BLEU: " + std::to_string(hyps.size()) +
                                " hypotheses vs " + std::to_string(refs.size()) +
                                " references");
  }
  if (hyps.empty()) throw std::invalid_argument("BLEU over an empty corpus");
  BleuStats stats;
  for (std::size_t i = 0; i < hyps.size(); ++i) stats.Add(hyps[i], refs[i]);
  return ScoreFromStats(stats);
}

BleuScore SentenceBleu(std::string_view hyp, std::string_view ref) {
  BleuStats stats;
  stats.Add(hyp, ref);
  return ScoreFromStats(stats, true);
}

}  // namespace simulst
