#include "mvsrc/dictionary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "mvsrc/error.hpp"

namespace mvsrc {

namespace {

std::optional<long long> parse_int(const std::string& s) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string> sorted_labels(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end(), label_less);
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

}  // namespace

bool label_less(const std::string& a, const std::string& b) {
  const auto ia = parse_int(a);
  const auto ib = parse_int(b);
  if (ia && ib) {
    if (*ia != *ib) return *ia < *ib;
    return a < b;
  }
  if (ia != ib && (ia || ib)) return ia.has_value();  // integers first
  return a < b;
}

Dictionary Dictionary::build(std::span<const Sample> samples) {
  if (samples.empty()) fail(ErrorCode::EmptyDictionary, "no training samples");

  const std::size_t d = samples.front().values.size();
  if (d == 0) fail(ErrorCode::Dimension, "training vectors must have length >= 1");

  std::vector<std::string> classes;
  std::vector<std::string> views;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (s.values.size() != d) {
      fail(ErrorCode::Dimension, "sample " + std::to_string(i) + " has length " +
                                     std::to_string(s.values.size()) + ", expected " +
                                     std::to_string(d));
    }
    classes.push_back(s.class_id);
    views.push_back(s.view_id);
  }

  Dictionary dict;
  dict.class_labels_ = sorted_labels(std::move(classes));
  dict.view_labels_ = sorted_labels(std::move(views));
  const std::size_t C = dict.class_labels_.size();
  const std::size_t M = dict.view_labels_.size();

  // Bucket sample indices by (class, view); stable within a bucket.
  std::vector<std::vector<std::size_t>> buckets(C * M);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t c = *dict.class_index(samples[i].class_id);
    const std::size_t m = *dict.view_index(samples[i].view_id);
    buckets[c * M + m].push_back(i);
  }
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t m = 0; m < M; ++m) {
      if (buckets[c * M + m].empty()) {
        fail(ErrorCode::Dimension, "no training sample for class '" + dict.class_labels_[c] +
                                       "' view '" + dict.view_labels_[m] + "'");
      }
    }
  }

  dict.atoms_ = Matrix(d, samples.size());
  dict.class_blocks_.resize(C);
  dict.view_blocks_.assign(C, std::vector<ColumnRange>(M));
  std::size_t col = 0;
  for (std::size_t c = 0; c < C; ++c) {
    dict.class_blocks_[c].begin = col;
    for (std::size_t m = 0; m < M; ++m) {
      dict.view_blocks_[c][m].begin = col;
      for (std::size_t idx : buckets[c * M + m]) {
        const auto& v = samples[idx].values;
        double norm_sq = 0.0;
        for (double e : v) {
          if (!std::isfinite(e)) {
            fail(ErrorCode::InvalidInput, "sample " + std::to_string(idx) + " has a non-finite entry");
          }
          norm_sq += e * e;
        }
        if (norm_sq == 0.0) {
          fail(ErrorCode::DegenerateSample, "sample " + std::to_string(idx) + " is the zero vector");
        }
        const double inv = 1.0 / std::sqrt(norm_sq);
        auto out = dict.atoms_.col(col);
        for (std::size_t r = 0; r < d; ++r) out[r] = v[r] * inv;
        ++col;
      }
      dict.view_blocks_[c][m].end = col;
    }
    dict.class_blocks_[c].end = col;
  }
  return dict;
}

std::optional<std::size_t> Dictionary::class_index(const std::string& label) const {
  auto it = std::find(class_labels_.begin(), class_labels_.end(), label);
  if (it == class_labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_labels_.begin());
}

std::optional<std::size_t> Dictionary::view_index(const std::string& label) const {
  auto it = std::find(view_labels_.begin(), view_labels_.end(), label);
  if (it == view_labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - view_labels_.begin());
}

std::size_t Dictionary::class_of_column(std::size_t i) const {
  for (std::size_t c = 0; c < class_blocks_.size(); ++c) {
    if (class_blocks_[c].contains(i)) return c;
  }
  fail(ErrorCode::Dimension, "column " + std::to_string(i) + " out of range");
}

Vector delta_c(std::span<const double> x, std::size_t c, const Dictionary& dict) {
  if (x.size() != dict.cols()) {
    fail(ErrorCode::Dimension, "coefficient length " + std::to_string(x.size()) +
                                   " does not match dictionary width " +
                                   std::to_string(dict.cols()));
  }
  if (c >= dict.num_classes()) {
    fail(ErrorCode::InvalidClass, "class index " + std::to_string(c) + " out of range");
  }
  const ColumnRange block = dict.class_block(c);
  Vector out(x.size(), 0.0);
  std::copy(x.begin() + static_cast<std::ptrdiff_t>(block.begin),
            x.begin() + static_cast<std::ptrdiff_t>(block.end),
            out.begin() + static_cast<std::ptrdiff_t>(block.begin));
  return out;
}

Vector delta_c(std::span<const double> x, const std::string& class_label,
               const Dictionary& dict) {
  const auto c = dict.class_index(class_label);
  if (!c) fail(ErrorCode::InvalidClass, "unknown class '" + class_label + "'");
  return delta_c(x, *c, dict);
}

}  // namespace mvsrc
