#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvsrc/matrix.hpp"
#include "mvsrc/sample.hpp"

namespace mvsrc {

// Half-open column range [begin, end).
struct ColumnRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
  friend bool operator==(const ColumnRange&, const ColumnRange&) = default;
};

// Structured training dictionary. Columns are unit-norm training vectors laid
// out class by class and, inside each class, view by view:
//
//   [ c1v1 ... c1vM | c2v1 ... c2vM | ... ]
//
// Class and view labels are ordered with `label_less`; samples sharing a
// (class, view) pair keep their input order. Immutable once built.
class Dictionary {
 public:
  static Dictionary build(std::span<const Sample> samples);

  const Matrix& atoms() const noexcept { return atoms_; }
  std::size_t rows() const noexcept { return atoms_.rows(); }
  std::size_t cols() const noexcept { return atoms_.cols(); }

  std::size_t num_classes() const noexcept { return class_labels_.size(); }
  std::size_t num_views() const noexcept { return view_labels_.size(); }

  const std::vector<std::string>& class_labels() const noexcept { return class_labels_; }
  const std::vector<std::string>& view_labels() const noexcept { return view_labels_; }

  std::optional<std::size_t> class_index(const std::string& label) const;
  std::optional<std::size_t> view_index(const std::string& label) const;

  ColumnRange class_block(std::size_t c) const { return class_blocks_.at(c); }
  ColumnRange view_block(std::size_t c, std::size_t m) const {
    return view_blocks_.at(c).at(m);
  }
  const std::vector<ColumnRange>& class_blocks() const noexcept { return class_blocks_; }

  // Class index owning column i.
  std::size_t class_of_column(std::size_t i) const;

 private:
  Matrix atoms_;
  std::vector<std::string> class_labels_;
  std::vector<std::string> view_labels_;
  std::vector<ColumnRange> class_blocks_;
  std::vector<std::vector<ColumnRange>> view_blocks_;
};

inline Dictionary build_dictionary(std::span<const Sample> samples) {
  return Dictionary::build(samples);
}

// Copy of x with every entry outside class c's block set to zero.
Vector delta_c(std::span<const double> x, std::size_t c, const Dictionary& dict);
Vector delta_c(std::span<const double> x, const std::string& class_label,
               const Dictionary& dict);

}  // namespace mvsrc
