// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"
#include "simulst/text_util.h"

namespace simulst {

namespace {

constexpr std::string_view kNativeTag = "<native> ";
constexpr std::string_view kSyntheticTag = "<synthetic> ";

const std::vector<std::string> kManifestColumns = {
    "id", "audio_frames", "transcript", "translation", "nll", "origin"};

}  // namespace

std::string ValidateRecord(const CorpusRecord &rec) {
  if (rec.audio_frames == 0) return "audio_frames must be > 0";
  if (Trim(rec.transcript).empty()) return "empty transcript";
  if (Trim(rec.translation).empty()) return "empty translation";
  if (rec.nll && !(*rec.nll >= 0.0)) return "nll must be non-negative";
  return {};
}

std::size_t CountChars(std::string_view utf8) { return DecodeUtf8(Trim(utf8)).size(); }

double CharRatio(const CorpusRecord &rec) {
  const std::size_t src = CountChars(rec.transcript);
  if (src == 0) throw std::invalid_argument("zero-length source");
  return static_cast<double>(CountChars(rec.translation)) / static_cast<double>(src);
}

double CharsPerFrame(const CorpusRecord &rec) {
  if (rec.audio_frames == 0) throw std::invalid_argument("zero audio frames");
  return static_cast<double>(CountChars(rec.translation)) /
         static_cast<double>(rec.audio_frames);
}

void FilterConfig::Validate() const {
  if (!(min_char_ratio > 0.0) || !(max_char_ratio > 0.0)) {
    throw std::invalid_argument("char ratio bounds must be positive");
  }
  if (!(min_char_ratio < max_char_ratio)) {
    throw std::invalid_argument("min_char_ratio must be < max_char_ratio");
  }
  if (nll_threshold && !(*nll_threshold > 0.0)) {
    throw std::invalid_argument("nll threshold must be positive");
  }
  if (chars_per_frame_bounds &&
      !(chars_per_frame_bounds->first >= 0.0 &&
        chars_per_frame_bounds->first < chars_per_frame_bounds->second)) {
    throw std::invalid_argument("chars-per-frame bounds must satisfy 0 <= min < max");
  }
}

void FilterReport::Merge(const FilterReport &other) {
  total += other.total;
  kept += other.kept;
  invalid += other.invalid;
  char_ratio += other.char_ratio;
  chars_per_frame += other.chars_per_frame;
  nll += other.nll;
}

std::optional<RejectReason> Classify(const CorpusRecord &rec, const FilterConfig &cfg) {
  if (!ValidateRecord(rec).empty()) return RejectReason::kInvalid;
  const double ratio = CharRatio(rec);
  if (ratio < cfg.min_char_ratio || ratio > cfg.max_char_ratio) {
    return RejectReason::kCharRatio;
  }
  if (cfg.chars_per_frame_bounds) {
    const double cpf = CharsPerFrame(rec);
    if (cpf < cfg.chars_per_frame_bounds->first ||
        cpf > cfg.chars_per_frame_bounds->second) {
      return RejectReason::kCharsPerFrame;
    }
  }
  if (cfg.nll_threshold && rec.nll && *rec.nll > *cfg.nll_threshold) {
    return RejectReason::kNll;
  }
  return std::nullopt;
}

namespace {

void Count(FilterReport *report, std::optional<RejectReason> reason) {
  ++report->total;
  if (!reason) {
    ++report->kept;
    return;
  }
  switch (*reason) {
    case RejectReason::kInvalid: ++report->invalid; break;
    case RejectReason::kCharRatio: ++report->char_ratio; break;
    case RejectReason::kCharsPerFrame: ++report->chars_per_frame; break;
    case RejectReason::kNll: ++report->nll; break;
  }
}

}  // namespace

FilterResult ApplyFilters(std::span<const CorpusRecord> records,
                          const FilterConfig &cfg) {
  cfg.Validate();
  FilterResult result;
  for (const auto &rec : records) {
    const auto reason = Classify(rec, cfg);
    Count(&result.report, reason);
    if (!reason) result.kept.push_back(rec);
  }
  return result;
}

FilterResult ApplyFilters(std::span<const ManifestEntry> entries,
                          const FilterConfig &cfg) {
  cfg.Validate();
  FilterResult result;
  for (const auto &entry : entries) {
    const auto reason =
        entry.record ? Classify(*entry.record, cfg) : RejectReason::kInvalid;
    Count(&result.report, reason);
    if (!reason) result.kept.push_back(*entry.record);
  }
  return result;
}

std::string FilterReportToJson(const FilterReport &report) {
  nlohmann::ordered_json j;
  j["total"] = report.total;
  j["kept"] = report.kept;
  j["invalid"] = report.invalid;
  j["rejected"] = {{"char_ratio", report.char_ratio},
                   {"chars_per_frame", report.chars_per_frame},
                   {"nll", report.nll}};
  return j.dump(2) + "\n";
}

std::vector<ManifestEntry> ParseManifest(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("manifest is empty (no header)");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = Split(line, '\t');
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[std::string(Trim(header[i]))] = i;
  for (const char *required : {"id", "audio_frames", "transcript", "translation"}) {
    if (!column.count(required)) {
      throw std::runtime_error(std::string("manifest header lacks column '") +
                               required + "'");
    }
  }

  std::vector<ManifestEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;

    ManifestEntry entry;
    entry.line = line_no;
    const auto fields = Split(line, '\t');
    if (fields.size() != header.size()) {
      entry.error = "expected " + std::to_string(header.size()) + " fields, got " +
                    std::to_string(fields.size());
      entries.push_back(std::move(entry));
      continue;
    }
    auto field = [&](const std::string &name) -> std::string {
      const auto it = column.find(name);
      return it == column.end() ? std::string() : fields[it->second];
    };

    CorpusRecord rec;
    rec.id = std::string(Trim(field("id")));
    rec.transcript = field("transcript");
    rec.translation = field("translation");
    const auto frames = ParseSize(field("audio_frames"));
    if (!frames) {
      entry.error = "bad audio_frames '" + field("audio_frames") + "'";
      entries.push_back(std::move(entry));
      continue;
    }
    rec.audio_frames = *frames;
    const std::string nll = std::string(Trim(field("nll")));
    if (!nll.empty()) {
      rec.nll = ParseDouble(nll);
      if (!rec.nll) {
        entry.error = "bad nll '" + nll + "'";
        entries.push_back(std::move(entry));
        continue;
      }
    }
    const std::string origin = std::string(Trim(field("origin")));
    if (!origin.empty()) {
      const auto parsed = ParseOrigin(origin);
      if (!parsed) {
        entry.error = "bad origin '" + origin + "'";
        entries.push_back(std::move(entry));
        continue;
      }
      rec.origin = *parsed;
    }
    entry.record = std::move(rec);
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open manifest " + path.string());
  try {
    return ParseManifest(is);
  } catch (const std::runtime_error &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

void WriteManifest(std::span<const CorpusRecord> records, std::ostream &os) {
  for (std::size_t i = 0; i < kManifestColumns.size(); ++i) {
    os << (i ? "\t" : "") << kManifestColumns[i];
  }
  os << '\n';
  for (const auto &r : records) {
    os << r.id << '\t' << r.audio_frames << '\t' << r.transcript << '\t'
       << r.translation << '\t' << (r.nll ? FormatDouble(*r.nll) : "") << '\t'
       << ToString(r.origin) << '\n';
  }
}

void WriteManifest(std::span<const CorpusRecord> records,
                   const std::filesystem::path &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  WriteManifest(records, os);
}

std::size_t Histogram::InRange() const {
  std::size_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

Histogram BuildHistogram(std::span<const double> values, std::size_t n_bins,
                         std::optional<std::pair<double, double>> range,
                         std::string label) {
  if (n_bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (values.empty()) throw std::invalid_argument("histogram over an empty stream");

  double lo = 0.0, hi = 0.0;
  if (range) {
    std::tie(lo, hi) = *range;
    if (!(lo < hi)) throw std::invalid_argument("histogram range must satisfy lo < hi");
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    lo = *mn;
    hi = *mx;
    if (lo == hi) {
      lo -= 0.5;
      hi += 0.5;
    }
  }

  Histogram h;
  h.dataset_label = std::move(label);
  h.counts.assign(n_bins, 0);
  h.bin_edges.resize(n_bins + 1);
  const double width = (hi - lo) / static_cast<double>(n_bins);
  for (std::size_t i = 0; i <= n_bins; ++i) h.bin_edges[i] = lo + width * i;
  h.bin_edges.back() = hi;

  for (double v : values) {
    if (v < lo) {
      ++h.below;
    } else if (v > hi || std::isnan(v)) {
      ++h.above;
    } else {
      auto bin = static_cast<std::size_t>((v - lo) / width);
      bin = std::min(bin, n_bins - 1);
      // Guard against rounding in (v - lo) / width near an edge.
      while (bin > 0 && v < h.bin_edges[bin]) --bin;
      while (bin + 1 < n_bins && v >= h.bin_edges[bin + 1]) ++bin;
      ++h.counts[bin];
    }
  }
  return h;
}

std::string HistogramToCsv(const Histogram &h) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += FormatDouble(h.bin_edges[i]) + "," + FormatDouble(h.bin_edges[i + 1]) +
           "," + std::to_string(h.counts[i]) + "\n";
  }
  return out;
}

std::string_view OriginTag(Origin origin) {
  return origin == Origin::kNative ? kNativeTag : kSyntheticTag;
}

std::string TagText(std::string_view text, Origin origin) {
  std::string out(OriginTag(origin));
  out += text;
  return out;
}

std::string TagOrigin(const CorpusRecord &rec) {
  return TagText(rec.translation, rec.origin);
}

std::string StripOriginTag(std::string_view tagged) {
  for (auto tag : {kNativeTag, kSyntheticTag}) {
    if (tagged.substr(0, tag.size()) == tag) return std::string(tagged.substr(tag.size()));
  }
  return std::string(tagged);
}

std::string ToString(Origin origin) {
  return origin == Origin::kNative ? "native" : "synthetic";
}

std::optional<Origin> ParseOrigin(std::string_view s) {
  if (s == "native") return Origin::kNative;
  if (s == "synthetic") return Origin::kSynthetic;
  return std::nullopt;
}

}  // namespace simulst
