// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "simulst/bleu.h"
#include "simulst/corpus.h"
#include "simulst/ctc.h"
#include "simulst/evaluation.h"
#include "simulst/latency.h"
#include "simulst/segmenter.h"
#include "simulst/simul_policy.h"
#include "simulst/toy_model.h"
#include "testing.h"

namespace simulst {
namespace {

using Clk = std::chrono::steady_clock;

double MsSince(Clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clk::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string &what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string Fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// 1. Max Output Length worked example.
Outcome MaxOutputLength() {
  Outcome o;
  CompressedSequence seq;
  seq.vectors = FeatureMatrix(2346, 4, 1.0);
  seq.group_labels.assign(2346, 1);
  seq.group_sizes.assign(2346, 2);
  const auto t0 = Clk::now();
  const std::size_t factor = MaxOutputLengthFactor(seq.Size(), 4000);
  const auto merged = MaxOutputLengthMerge(seq, 4000);
  const double ms = MsSince(t0);
  o.Check(factor == 3, "factor " + std::to_string(factor));
  o.Check(merged.Size() == 782, "length " + std::to_string(merged.Size()));
  o.Check(ms < 1.0, "took " + Fmt(ms) + " ms");
  o.detail = o.pass ? "factor 3, 2346 -> 782 in " + Fmt(ms) + " ms" : o.detail;
  return o;
}

// 2. Forward loss against exhaustive path enumeration.
Outcome ForwardLoss() {
  Outcome o;
  std::mt19937_64 rng(2024);
  const auto t0 = Clk::now();
  double worst = 0.0;
  std::size_t infeasible = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t frames = 1 + rng() % 6;
    const std::size_t vocab = 2 + rng() % 3;
    const auto post = testing::RandomPosterior(rng, frames, vocab);
    LabelSequence target(rng() % 4);
    for (auto &y : target) y = static_cast<TokenId>(1 + rng() % (vocab - 1));
    const double got = CtcForwardLoss(post, target);
    const double want = testing::BruteForceCtcLoss(post, target);
    if (std::isinf(want)) {
      ++infeasible;
      o.Check(std::isinf(got) && got > 0, "case " + std::to_string(i) + " should be +inf");
      continue;
    }
    worst = std::max(worst, std::abs(got - want));
    o.Check(std::abs(got - want) <= 1e-9, "case " + std::to_string(i) + " off by " +
                                              Fmt(std::abs(got - want)));
  }
  const double ms = MsSince(t0);
  o.Check(ms < 5000.0, "took " + Fmt(ms) + " ms");
  if (o.pass) {
    o.detail = "200 cases, max |diff| " + Fmt(worst) + ", " + std::to_string(infeasible) +
               " infeasible, " + Fmt(ms) + " ms";
  }
  return o;
}

// 3. Compression mass conservation and group accounting.
Outcome Compression() {
  Outcome o;
  std::mt19937_64 rng(2025);
  double worst = 0.0;
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const std::size_t frames = 1 + rng() % 60;
    const std::size_t vocab = 2 + rng() % 5;
    const std::size_t dim = 1 + rng() % 8;
    const auto post = testing::RandomPosterior(rng, frames, vocab);
    const auto states = testing::RandomMatrix(rng, frames, dim);
    const auto c = CtcCompress(states, post);
    const auto labels = GreedyLabels(post);

    std::size_t runs = 0;
    for (std::size_t t = 0; t < frames; ++t) runs += (t == 0 || labels[t] != labels[t - 1]);
    o.Check(c.Size() == runs, "group count != label runs");
    o.Check(c.vectors.Frames() == c.Size() && c.group_labels.size() == c.Size(),
            "inconsistent group arrays");
    std::size_t covered = 0;
    for (std::size_t g = 0; g < c.Size() && o.pass; ++g) {
      o.Check(c.group_sizes[g] > 0, "empty group");
      for (std::size_t t = covered; t < covered + c.group_sizes[g] && t < frames; ++t) {
        o.Check(labels[t] == c.group_labels[g], "group mixes labels");
      }
      covered += c.group_sizes[g];
    }
    o.Check(covered == frames, "group sizes do not sum to T");
    for (std::size_t d = 0; d < dim && o.pass; ++d) {
      double in = 0.0, out = 0.0;
      for (std::size_t t = 0; t < frames; ++t) in += states(t, d);
      for (std::size_t g = 0; g < c.Size(); ++g) out += c.group_sizes[g] * c.vectors(g, d);
      worst = std::max(worst, std::abs(in - out));
      o.Check(std::abs(in - out) <= 1e-6, "mass off by " + Fmt(std::abs(in - out)));
    }
  }
  if (o.pass) o.detail = "1000 cases, max mass diff " + Fmt(worst);
  return o;
}

// 4. Filtering partition on the bundled manifest.
Outcome Filtering() {
  Outcome o;
  const auto entries = ReadManifest(testing::DataPath("filter/toy_manifest.tsv"));
  const auto result = ApplyFilters(entries, FilterConfig{});
  const auto got = nlohmann::json::parse(FilterReportToJson(result.report));
  const auto want =
      nlohmann::json::parse(testing::ReadFile(testing::DataPath("filter/golden_report.json")));
  o.Check(got == want, "report " + got.dump() + " != " + want.dump());
  std::istringstream ids(testing::ReadFile(testing::DataPath("filter/golden_kept_ids.txt")));
  std::vector<std::string> want_ids;
  for (std::string id; std::getline(ids, id);) {
    if (!id.empty()) want_ids.push_back(id);
  }
  std::vector<std::string> got_ids;
  for (const auto &r : result.kept) got_ids.push_back(r.id);
  o.Check(got_ids == want_ids, "kept ids differ");
  if (o.pass) o.detail = got.dump();
  return o;
}

// 5. Segmentation validity and the single-peak case.
Outcome Segmentation() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t fallbacks = 0;
  for (int i = 0; i < 500 && o.pass; ++i) {
    SplitProbabilities p;
    p.values.resize(1 + rng() % 4000);
    for (double &x : p.values) x = u(rng);
    SegmentationConfig cfg;
    cfg.max_segment_ms = 10.0 * (1 + rng() % 600);
    cfg.min_segment_ms = (rng() % 2) ? 0.0 : cfg.max_segment_ms * 0.6 * u(rng);
    const auto m = DncSplit(p, cfg);
    const auto problems = ValidateManifest(m, p.DurationMs());
    o.Check(problems.empty(), "case " + std::to_string(i) + ": " +
                                  (problems.empty() ? "" : problems.front()));
    for (const auto &s : m.segments) {
      o.Check(s.DurationMs() <= cfg.max_segment_ms || !m.warnings.empty(),
              "case " + std::to_string(i) + " has an overlong segment without warning");
    }
    fallbacks += !m.warnings.empty();
  }
  SplitProbabilities peak;
  peak.values.assign(100, 0.1);
  peak.values[37] = 0.9;
  const auto m = DncSplit(peak, {800.0, 0.0});
  o.Check(m.segments.size() == 2 && m.segments[0] == Segment{0.0, 370.0} &&
              m.segments[1] == Segment{370.0, 1000.0},
          "single peak not split at frame 37");
  if (o.pass) {
    o.detail = "500 cases valid (" + std::to_string(fallbacks) +
               " with fallback warnings), peak split at 370 ms";
  }
  return o;
}

// Word-level delays of a trace, grouped on word-initial pieces.
struct WordTimes {
  std::vector<double> src, wall;
  std::vector<std::size_t> last_token;  // 1-based
};

WordTimes WordsOf(const SimulTrace &trace) {
  const std::string marker = "\xe2\x96\x81";
  WordTimes w;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto &e = trace.events[i];
    if (w.src.empty() || e.token.rfind(marker, 0) == 0) {
      w.src.push_back(e.source_delay_ms);
      w.wall.push_back(e.wallclock_delay_ms);
      w.last_token.push_back(i + 1);
    } else {
      w.src.back() = e.source_delay_ms;
      w.wall.back() = e.wallclock_delay_ms;
      w.last_token.back() = i + 1;
    }
  }
  return w;
}

// 6. Golden traces and computation-aware lagging.
Outcome WaitKEndToEnd() {
  Outcome o;
  std::size_t identical = 0;
  double worst_zero = 0.0;
  std::vector<std::string> shifts;
  for (const auto &script : testing::GoldenScripts()) {
    const auto ref = script.ReferenceText();
    for (double seg : testing::GoldenSegments()) {
      for (std::size_t k : testing::GoldenKs()) {
        const std::string tag = script.id + " seg " + Fmt(seg) + " k " + std::to_string(k);
        const auto trace = testing::RunToy(script, seg, k);
        const bool same = TraceToJson(trace) ==
                          testing::ReadFile(testing::GoldenTracePath(script.id, seg, k));
        identical += same;
        o.Check(same, tag + ": trace differs from golden file");

        const auto zero = ScoreUtterance(script.id, trace, script.total_ms, ref);
        worst_zero = std::max(worst_zero, std::abs(zero.al_ca_ms - zero.al_ms));
        o.Check(std::abs(zero.al_ca_ms - zero.al_ms) <= 1e-9, tag + ": AL_CA != AL");

        auto costly = script;
        costly.decode_cost_ms = 300.0;
        costly.encode_cost_ms = 0.0;
        const auto slow = testing::RunToy(costly, seg, k);
        const auto m = ScoreUtterance(script.id, slow, script.total_ms, ref);

        // Each decoder call charges 300 ms; token i is emitted after i calls.
        const auto words = WordsOf(slow);
        std::size_t tau = words.src.size();
        for (std::size_t i = 0; i < words.src.size(); ++i) {
          if (words.src[i] >= script.total_ms) {
            tau = i + 1;
            break;
          }
        }
        double shift = 0.0;
        for (std::size_t i = 0; i < tau; ++i) shift += 300.0 * words.last_token[i];
        shift /= static_cast<double>(tau);
        const double diff = m.al_ca_ms - m.al_ms;
        o.Check(diff > 0.0, tag + ": AL_CA - AL not positive");
        o.Check(std::abs(diff - shift) <= 1e-6,
                tag + ": AL_CA - AL = " + Fmt(diff) + ", expected " + Fmt(shift));
        if (seg == 320 && k == 3) shifts.push_back(script.id + " +" + Fmt(diff));
      }
    }
  }
  if (o.pass) {
    std::string s;
    for (const auto &x : shifts) s += (s.empty() ? "" : ", ") + x;
    o.detail = std::to_string(identical) + "/18 traces identical, zero-cost max |AL_CA-AL| " +
               Fmt(worst_zero) + ", 300 ms shifts at (320,3): " + s;
  }
  return o;
}

// 7. AL worked examples.
Outcome LaggingHandCases() {
  Outcome o;
  const double a = AverageLagging(std::vector<double>{3000}, 3000, 1);
  const double b = AverageLagging(std::vector<double>{1000, 2000, 3000}, 3000, 3);
  const double c = AverageLagging(std::vector<double>{0, 0}, 2000, 2);
  o.Check(a == 3000.0, "case 1 = " + Fmt(a));
  o.Check(b == 1000.0, "case 2 = " + Fmt(b));
  o.Check(c == -500.0, "case 3 = " + Fmt(c));
  if (o.pass) o.detail = Fmt(a) + "; " + Fmt(b) + "; " + Fmt(c);
  return o;
}

// 8. AL non-decreasing in k.
Outcome LaggingMonotoneInK() {
  Outcome o;
  const auto scripts = testing::GoldenScripts();
  for (double seg : testing::GoldenSegments()) {
    std::vector<double> prev_al(scripts.size(), -1e300);
    std::vector<std::vector<double>> prev_delays(scripts.size());
    double prev_corpus = -1e300;
    for (std::size_t k = 1; k <= 14; ++k) {
      std::vector<double> als;
      for (std::size_t s = 0; s < scripts.size(); ++s) {
        const std::string tag = scripts[s].id + " seg " + Fmt(seg) + " k " + std::to_string(k);
        const auto trace = testing::RunToy(scripts[s], seg, k);
        const auto delays = trace.SourceDelays();
        if (!prev_delays[s].empty()) {
          o.Check(delays.size() == prev_delays[s].size(), tag + ": token count changed");
          for (std::size_t i = 0; i < delays.size() && i < prev_delays[s].size(); ++i) {
            o.Check(delays[i] >= prev_delays[s][i],
                    tag + ": token " + std::to_string(i) + " delay decreased");
          }
        }
        prev_delays[s] = delays;
        const double al =
            ScoreUtterance(scripts[s].id, trace, scripts[s].total_ms, scripts[s].ReferenceText())
                .al_ms;
        o.Check(al >= prev_al[s], tag + ": AL " + Fmt(al) + " < " + Fmt(prev_al[s]));
        prev_al[s] = al;
        als.push_back(al);
      }
      const double corpus = CorpusAggregate(als);
      o.Check(corpus >= prev_corpus, "seg " + Fmt(seg) + " k " + std::to_string(k) +
                                         ": corpus AL decreased");
      prev_corpus = corpus;
    }
  }
  if (o.pass) o.detail = "3 scripts x 2 segments x k = 1..14";
  return o;
}

// 9. BLEU identities.
Outcome Bleu() {
  Outcome o;
  const std::vector<std::string> corpus = {"the cat sat on the mat", "Hallo Welt!",
                                           "a b c d e f g"};
  const auto same = CorpusBleu(corpus, corpus);
  o.Check(same.score == 100.0, "identical corpora scored " + Fmt(same.score));
  const std::vector<std::string> h = {"a b c d"}, r = {"a b c d e"};
  const auto bp = CorpusBleu(h, r);
  const double want = 100.0 * std::exp(-0.25);
  o.Check(std::abs(bp.score - want) <= 1e-6, "BP example scored " + Fmt(bp.score));
  if (o.pass) o.detail = "identical = " + Fmt(same.score) + ", BP example = " + Fmt(bp.score);
  return o;
}

// 10. Regime boundaries.
Outcome Regimes() {
  Outcome o;
  o.Check(ClassifyRegime(1000) == LatencyRegime::kLow, "1000 not low");
  o.Check(ClassifyRegime(2000) == LatencyRegime::kMedium, "2000 not medium");
  o.Check(ClassifyRegime(4000) == LatencyRegime::kHigh, "4000 not high");
  if (o.pass) o.detail = "1000 low, 2000 medium, 4000 high";
  return o;
}

// 11. Full sweep on the golden corpus.
Outcome FullSweep() {
  Outcome o;
  std::vector<EvalItem> items;
  const auto scripts = testing::GoldenScripts();
  for (const auto &s : scripts) items.push_back({s.id, ScriptAudio(s), s.ReferenceText()});
  ModelFactory factory = [&scripts](const EvalItem &item,
                                    Clock &) -> std::unique_ptr<TranslationModel> {
    for (const auto &s : scripts) {
      if (s.id == item.id) return std::make_unique<ToyModel>(s);
    }
    throw std::runtime_error("no script for " + item.id);
  };
  const std::vector<double> segments = {320, 640};
  const auto grid = SweepGrid(segments, 1, 14);
  const auto t0 = Clk::now();
  std::vector<CurveRow> rows;
  std::size_t failures = 0;
  for (const auto &r : Sweep(grid, factory, items)) {
    failures += r.failures.size();
    rows.push_back(ToCurveRow(r));
  }
  const auto csv = CurveToCsv(rows);
  const double secs = MsSince(t0) / 1000.0;
  o.Check(secs < 60.0, "took " + Fmt(secs) + " s");
  o.Check(failures == 0, std::to_string(failures) + " utterance failures");

  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  o.Check(line == "segment_ms,k,AL,AL_CA,BLEU", "bad header '" + line + "'");
  std::size_t n = 0;
  while (std::getline(is, line)) {
    std::vector<double> fields;
    std::istringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) {
      char *end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      o.Check(!f.empty() && *end == '\0' && std::isfinite(v), "bad field '" + f + "'");
      fields.push_back(v);
    }
    o.Check(fields.size() == 5, "row " + std::to_string(n + 1) + " has " +
                                    std::to_string(fields.size()) + " fields");
    if (fields.size() == 5 && n < grid.size()) {
      o.Check(fields[0] == grid[n].segment_ms && fields[1] == grid[n].k,
              "row " + std::to_string(n + 1) + " out of grid order");
      o.Check(fields[4] >= 0.0 && fields[4] <= 100.0, "BLEU out of range");
    }
    ++n;
  }
  o.Check(n == 28, std::to_string(n) + " rows");
  if (o.pass) o.detail = "28 rows in " + Fmt(secs) + " s";
  return o;
}

}  // namespace
}  // namespace simulst

int main() {
  using simulst::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 max output length merge", simulst::MaxOutputLength},
      {"AC2 CTC forward loss vs enumeration", simulst::ForwardLoss},
      {"AC3 CTC compression accounting", simulst::Compression},
      {"AC4 filtering partition", simulst::Filtering},
      {"AC5 segmentation manifests", simulst::Segmentation},
      {"AC6 wait-k golden traces and AL_CA", simulst::WaitKEndToEnd},
      {"AC7 AL hand cases", simulst::LaggingHandCases},
      {"AC8 AL monotone in k", simulst::LaggingMonotoneInK},
      {"AC9 BLEU identities", simulst::Bleu},
      {"AC10 regime boundaries", simulst::Regimes},
      {"AC11 full sweep", simulst::FullSweep},
  };
  int failed = 0;
  for (const auto &[name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
