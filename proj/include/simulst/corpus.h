// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_CORPUS_H_
#define SIMULST_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace simulst {

enum class Origin { kNative, kSynthetic };

struct CorpusRecord {
  std::string id;
  std::size_t audio_frames = 0;  // 10 ms frames
  std::string transcript;
  std::string translation;
  std::optional<double> nll;  // per-sequence -log p(Y|X)
  Origin origin = Origin::kNative;
};

// Empty string when the record satisfies its invariants, otherwise the
// first violated one.
std::string ValidateRecord(const CorpusRecord &rec);

// Characters are Unicode scalar values of the whitespace-trimmed text,
// inner spaces included.
std::size_t CountChars(std::string_view utf8);

double CharRatio(const CorpusRecord &rec);
double CharsPerFrame(const CorpusRecord &rec);

struct FilterConfig {
  double min_char_ratio = 0.8;
  double max_char_ratio = 1.6;
  std::optional<double> nll_threshold = 4.0;
  std::optional<std::pair<double, double>> chars_per_frame_bounds;

  void Validate() const;
};

enum class RejectReason { kInvalid, kCharRatio, kCharsPerFrame, kNll };

// Mergeable per-reason counters.
struct FilterReport {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t invalid = 0;
  std::size_t char_ratio = 0;
  std::size_t chars_per_frame = 0;
  std::size_t nll = 0;

  std::size_t Rejected() const { return char_ratio + chars_per_frame + nll; }
  void Merge(const FilterReport &other);
  bool operator==(const FilterReport &) const = default;
};

struct FilterResult {
  std::vector<CorpusRecord> kept;
  FilterReport report;
};

// Attribution order: invalid, char ratio, chars per frame, NLL. Bounds are
// inclusive.
std::optional<RejectReason> Classify(const CorpusRecord &rec, const FilterConfig &cfg);
FilterResult ApplyFilters(std::span<const CorpusRecord> records, const FilterConfig &cfg);

// One manifest data line. `record` is empty when the line failed to parse.
struct ManifestEntry {
  std::size_t line = 0;
  std::optional<CorpusRecord> record;
  std::string error;
};

// Unparsable lines are counted as invalid.
FilterResult ApplyFilters(std::span<const ManifestEntry> entries, const FilterConfig &cfg);

std::string FilterReportToJson(const FilterReport &report);

// TSV manifest with header id, audio_frames, transcript, translation, nll,
// origin. nll may be empty; origin is "native" or "synthetic".
std::vector<ManifestEntry> ParseManifest(std::istream &is);
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path &path);
void WriteManifest(std::span<const CorpusRecord> records, std::ostream &os);
void WriteManifest(std::span<const CorpusRecord> records,
                   const std::filesystem::path &path);

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::size_t below = 0;  // values under the first edge
  std::size_t above = 0;  // values over the last edge
  std::string dataset_label;

  std::size_t InRange() const;
};

// Equal-width bins over `range` or the observed [min, max]. Bins are
// left-closed and right-open except the last, which is closed.
Histogram BuildHistogram(std::span<const double> values, std::size_t n_bins,
                         std::optional<std::pair<double, double>> range = std::nullopt,
                         std::string label = {});

// bin_lo,bin_hi,count
std::string HistogramToCsv(const Histogram &h);

std::string_view OriginTag(Origin origin);
std::string TagOrigin(const CorpusRecord &rec);
std::string TagText(std::string_view text, Origin origin);
// Removes a leading origin tag; text without a tag is returned unchanged.
std::string StripOriginTag(std::string_view tagged);

std::string ToString(Origin origin);
std::optional<Origin> ParseOrigin(std::string_view s);

}  // namespace simulst

#endif  // SIMULST_CORPUS_H_
