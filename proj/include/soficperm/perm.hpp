#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "soficperm/rational.hpp"

namespace soficperm {

/// A bijection of {0, ..., d-1}; point k is sent to image[k].
class Permutation {
 public:
  Permutation() = default;
  /// Throws InputError unless `image` is a bijection.
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::size_t degree);
  /// k -> k + shift (mod degree).
  static Permutation shift(std::size_t degree, std::int64_t shift);

  std::size_t degree() const { return image_.size(); }
  std::uint32_t operator[](std::size_t k) const { return image_[k]; }
  std::span<const std::uint32_t> image() const { return image_; }

  Permutation inverse() const;
  std::size_t fixed_points() const;
  bool is_identity() const { return fixed_points() == degree(); }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<std::uint32_t> image, Unchecked) : image_(std::move(image)) {}
  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation from_trusted_image(std::vector<std::uint32_t>);

  std::vector<std::uint32_t> image_;
};

/// Skips the bijection check; callers guarantee it.
Permutation from_trusted_image(std::vector<std::uint32_t> image);

/// (a o b)[k] = a[b[k]].
Permutation compose(const Permutation& a, const Permutation& b);

/// Number of points where a and b differ.
std::size_t hamming_count(const Permutation& a, const Permutation& b);

/// Fraction of points not fixed by a^{-1} b.
Rational normalized_hamming(const Permutation& a, const Permutation& b);

/// 0/1 matrix with at most one nonzero per row and per column, i.e. a
/// partial injection. Stored as a sparse row -> column map.
///
/// The permutation matrix of p has its entries at (p[k], k), so that
/// multiply(matrix(a), matrix(b)) == matrix(compose(a, b)).
class SubPermMatrix {
 public:
  static constexpr std::int32_t kEmpty = -1;

  SubPermMatrix() = default;
  /// The zero matrix of the given degree.
  explicit SubPermMatrix(std::size_t degree);

  /// Throws InputError on out-of-range indices or a repeated row/column.
  static SubPermMatrix from_entries(std::size_t degree,
                                    std::span<const std::pair<std::uint32_t, std::uint32_t>> entries);
  static SubPermMatrix identity(std::size_t degree);
  static SubPermMatrix from_permutation(const Permutation& p);

  std::size_t degree() const { return row_to_col_.size(); }
  std::size_t nonzeros() const { return nnz_; }
  std::int32_t col_of_row(std::size_t row) const { return row_to_col_[row]; }
  std::int32_t row_of_col(std::size_t col) const { return col_to_row_[col]; }
  bool at(std::size_t row, std::size_t col) const {
    return row_to_col_[row] == static_cast<std::int32_t>(col);
  }

  /// Entries sorted by row.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries() const;
  std::size_t diagonal_count() const;
  bool is_permutation() const { return nnz_ == degree(); }
  SubPermMatrix transpose() const;

  friend bool operator==(const SubPermMatrix& a, const SubPermMatrix& b) {
    return a.row_to_col_ == b.row_to_col_;
  }

 private:
  std::vector<std::int32_t> row_to_col_;
  std::vector<std::int32_t> col_to_row_;
  std::size_t nnz_ = 0;
};

SubPermMatrix multiply(const SubPermMatrix& a, const SubPermMatrix& b);

/// Diagonal entries divided by the degree.
Rational normalized_trace(const SubPermMatrix& m);

}  // namespace soficperm
