// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_FEATURES_H_
#define SIMULST_FEATURES_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace simulst {

inline constexpr double kFrameDurationMs = 10.0;

class FeatureView;

// Row-major T x D matrix of real features, one row per 10 ms frame.
// T may be zero; D is always at least one.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t frames, std::size_t dim, double fill = 0.0);
  FeatureMatrix(std::size_t frames, std::size_t dim, std::vector<double> values);

  // Builds from nested rows; every row must have the same length.
  static FeatureMatrix FromRows(const std::vector<std::vector<double>> &rows);

  std::size_t Frames() const { return frames_; }
  std::size_t Dim() const { return dim_; }
  double FrameDurationMs() const { return frame_duration_ms_; }
  double DurationMs() const { return frames_ * frame_duration_ms_; }
  bool Empty() const { return frames_ == 0; }

  double operator()(std::size_t t, std::size_t d) const {
    return values_[t * dim_ + d];
  }
  double &operator()(std::size_t t, std::size_t d) {
    return values_[t * dim_ + d];
  }

  std::span<const double> Row(std::size_t t) const {
    return {values_.data() + t * dim_, dim_};
  }
  std::span<double> Row(std::size_t t) {
    return {values_.data() + t * dim_, dim_};
  }

  const std::vector<double> &Values() const { return values_; }

  // Appends one frame; its size must equal Dim().
  void AppendRow(std::span<const double> row);

  // Non-owning view over the first `frames` rows.
  FeatureView Prefix(std::size_t frames) const;
  FeatureView View() const;

  bool operator==(const FeatureMatrix &other) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t dim_ = 1;
  double frame_duration_ms_ = kFrameDurationMs;
  std::vector<double> values_;
};

// Read-only window over the leading frames of a FeatureMatrix. The viewed
// matrix must outlive the view.
class FeatureView {
 public:
  FeatureView(const FeatureMatrix &m, std::size_t frames);

  std::size_t Frames() const { return frames_; }
  std::size_t Dim() const { return matrix_->Dim(); }
  double DurationMs() const { return frames_ * matrix_->FrameDurationMs(); }
  std::span<const double> Row(std::size_t t) const { return matrix_->Row(t); }
  double operator()(std::size_t t, std::size_t d) const {
    return (*matrix_)(t, d);
  }

  FeatureMatrix ToMatrix() const;

 private:
  const FeatureMatrix *matrix_;
  std::size_t frames_;
};

// Binary container: "FBNK", u32 T, u32 D (little-endian), then T*D
// little-endian float32 values.
void WriteFeatureMatrix(const FeatureMatrix &m, const std::filesystem::path &path);
FeatureMatrix ReadFeatureMatrix(const std::filesystem::path &path);

std::vector<char> EncodeFeatureMatrix(const FeatureMatrix &m);
FeatureMatrix DecodeFeatureMatrix(std::span<const char> bytes);

}  // namespace simulst

#endif  // SIMULST_FEATURES_H_
