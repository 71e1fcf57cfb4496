// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "simulst/features.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace simulst {

namespace {

constexpr char kMagic[4] = {'F', 'B', 'N', 'K'};
constexpr std::size_t kHeaderBytes = 12;

void PutU32(std::vector<char> *out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out->push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
}

std::uint32_t GetU32(const char *p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t frames, std::size_t dim, double fill)
    : frames_(frames), dim_(dim), values_(frames * dim, fill) {
  if (dim == 0) throw std::invalid_argument("feature dimension must be >= 1");
}

FeatureMatrix::FeatureMatrix(std::size_t frames, std::size_t dim,
                             std::vector<double> values)
    : frames_(frames), dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw std::invalid_argument("feature dimension must be >= 1");
  if (values_.size() != frames * dim) {
    throw std::invalid_argument("feature matrix expects " +
                                std::to_string(frames * dim) + " values, got " +
                                std::to_string(values_.size()));
  }
}

FeatureMatrix FeatureMatrix::FromRows(
    const std::vector<std::vector<double>> &rows) {
  if (rows.empty()) throw std::invalid_argument("FromRows needs at least one row");
  FeatureMatrix m(0, rows.front().size());
  for (const auto &r : rows) m.AppendRow(r);
  return m;
}

void FeatureMatrix::AppendRow(std::span<const double> row) {
  if (row.size() != dim_) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) +
                                " entries, expected " + std::to_string(dim_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++frames_;
}

FeatureView FeatureMatrix::Prefix(std::size_t frames) const {
  return FeatureView(*this, frames);
}

FeatureView FeatureMatrix::View() const { return FeatureView(*this, frames_); }

FeatureView::FeatureView(const FeatureMatrix &m, std::size_t frames)
    : matrix_(&m), frames_(frames) {
  if (frames > m.Frames()) {
    throw std::out_of_range("prefix of " + std::to_string(frames) +
                            " frames exceeds matrix of " +
                            std::to_string(m.Frames()));
  }
}

FeatureMatrix FeatureView::ToMatrix() const {
  const auto &all = matrix_->Values();
  std::vector<double> values(all.begin(), all.begin() + frames_ * Dim());
  return FeatureMatrix(frames_, Dim(), std::move(values));
}

std::vector<char> EncodeFeatureMatrix(const FeatureMatrix &m) {
  std::vector<char> out;
  out.reserve(kHeaderBytes + m.Values().size() * 4);
  for (char c : kMagic) out.push_back(c);
  PutU32(&out, static_cast<std::uint32_t>(m.Frames()));
  PutU32(&out, static_cast<std::uint32_t>(m.Dim()));
  for (double v : m.Values()) {
    PutU32(&out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

FeatureMatrix DecodeFeatureMatrix(std::span<const char> bytes) {
  if (bytes.size() < kHeaderBytes ||
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not an FBNK feature container");
  }
  const std::uint32_t frames = GetU32(bytes.data() + 4);
  const std::uint32_t dim = GetU32(bytes.data() + 8);
  if (dim == 0) throw std::runtime_error("FBNK container has D = 0");
  const std::size_t count = static_cast<std::size_t>(frames) * dim;
  if (bytes.size() != kHeaderBytes + count * 4) {
    throw std::runtime_error("FBNK payload size mismatch: header says " +
                             std::to_string(frames) + "x" + std::to_string(dim));
  }
  std::vector<double> values(count);
  const char *p = bytes.data() + kHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += 4) {
    values[i] = std::bit_cast<float>(GetU32(p));
  }
  return FeatureMatrix(frames, dim, std::move(values));
}

void WriteFeatureMatrix(const FeatureMatrix &m,
                        const std::filesystem::path &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto bytes = EncodeFeatureMatrix(m);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

FeatureMatrix ReadFeatureMatrix(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(is)),
                          std::istreambuf_iterator<char>());
  try {
    return DecodeFeatureMatrix(bytes);
  } catch (const std::runtime_error &e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace simulst
