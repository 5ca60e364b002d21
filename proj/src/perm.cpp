#include "soficperm/perm.hpp"

#include <numeric>
#include <string>

#include "soficperm/errors.hpp"

namespace soficperm {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (auto v : image_) {
    if (v >= image_.size() || seen[v])
      throw InputError("permutation image is not a bijection of {0.." +
                       std::to_string(image_.size()) + "-1}");
    seen[v] = true;
  }
}

Permutation from_trusted_image(std::vector<std::uint32_t> image) {
  return Permutation(std::move(image), Permutation::Unchecked{});
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<std::uint32_t> img(degree);
  std::iota(img.begin(), img.end(), 0u);
  return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::shift(std::size_t degree, std::int64_t shift) {
  if (degree == 0) return Permutation{};
  const auto d = static_cast<std::int64_t>(degree);
  const std::int64_t s = ((shift % d) + d) % d;
  std::vector<std::uint32_t> img(degree);
  for (std::int64_t k = 0; k < d; ++k) img[k] = static_cast<std::uint32_t>((k + s) % d);
  return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> inv(image_.size());
  for (std::size_t k = 0; k < image_.size(); ++k) inv[image_[k]] = static_cast<std::uint32_t>(k);
  return Permutation(std::move(inv), Unchecked{});
}

std::size_t Permutation::fixed_points() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < image_.size(); ++k) n += image_[k] == k;
  return n;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree())
    throw InputError("compose: degree mismatch " + std::to_string(a.degree()) + " vs " +
                     std::to_string(b.degree()));
  std::vector<std::uint32_t> img(a.degree());
  for (std::size_t k = 0; k < img.size(); ++k) img[k] = a.image_[b.image_[k]];
  return Permutation(std::move(img), Permutation::Unchecked{});
}

std::size_t hamming_count(const Permutation& a, const Permutation& b) {
  if (a.degree() != b.degree()) throw InputError("hamming distance: degree mismatch");
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.degree(); ++k) n += a[k] != b[k];
  return n;
}

Rational normalized_hamming(const Permutation& a, const Permutation& b) {
  const auto n = hamming_count(a, b);
  if (a.degree() == 0) return Rational{0};
  return make_rational(n, a.degree());
}

SubPermMatrix::SubPermMatrix(std::size_t degree)
    : row_to_col_(degree, kEmpty), col_to_row_(degree, kEmpty) {}

SubPermMatrix SubPermMatrix::from_entries(
    std::size_t degree, std::span<const std::pair<std::uint32_t, std::uint32_t>> entries) {
  SubPermMatrix m(degree);
  for (auto [r, c] : entries) {
    if (r >= degree || c >= degree)
      throw InputError("sub-permutation entry (" + std::to_string(r) + "," + std::to_string(c) +
                       ") outside degree " + std::to_string(degree));
    if (m.row_to_col_[r] != kEmpty || m.col_to_row_[c] != kEmpty)
      throw InputError("sub-permutation matrix has two nonzeros in row " + std::to_string(r) +
                       " or column " + std::to_string(c));
    m.row_to_col_[r] = static_cast<std::int32_t>(c);
    m.col_to_row_[c] = static_cast<std::int32_t>(r);
    ++m.nnz_;
  }
  return m;
}

SubPermMatrix SubPermMatrix::identity(std::size_t degree) {
  SubPermMatrix m(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    m.row_to_col_[k] = m.col_to_row_[k] = static_cast<std::int32_t>(k);
  }
  m.nnz_ = degree;
  return m;
}

SubPermMatrix SubPermMatrix::from_permutation(const Permutation& p) {
  SubPermMatrix m(p.degree());
  for (std::size_t k = 0; k < p.degree(); ++k) {
    m.row_to_col_[p[k]] = static_cast<std::int32_t>(k);
    m.col_to_row_[k] = static_cast<std::int32_t>(p[k]);
  }
  m.nnz_ = p.degree();
  return m;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> SubPermMatrix::entries() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  out.reserve(nnz_);
  for (std::size_t r = 0; r < row_to_col_.size(); ++r)
    if (row_to_col_[r] != kEmpty)
      out.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(row_to_col_[r]));
  return out;
}

std::size_t SubPermMatrix::diagonal_count() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < row_to_col_.size(); ++r)
    n += row_to_col_[r] == static_cast<std::int32_t>(r);
  return n;
}

SubPermMatrix SubPermMatrix::transpose() const {
  SubPermMatrix t(degree());
  t.row_to_col_ = col_to_row_;
  t.col_to_row_ = row_to_col_;
  t.nnz_ = nnz_;
  return t;
}

SubPermMatrix multiply(const SubPermMatrix& a, const SubPermMatrix& b) {
  if (a.degree() != b.degree())
    throw InputError("multiply: degree mismatch " + std::to_string(a.degree()) + " vs " +
                     std::to_string(b.degree()));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> e;
  for (std::size_t r = 0; r < a.degree(); ++r) {
    const auto mid = a.col_of_row(r);
    if (mid == SubPermMatrix::kEmpty) continue;
    const auto c = b.col_of_row(static_cast<std::size_t>(mid));
    if (c == SubPermMatrix::kEmpty) continue;
    e.emplace_back(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c));
  }
  return SubPermMatrix::from_entries(a.degree(), e);
}

Rational normalized_trace(const SubPermMatrix& m) {
  if (m.degree() == 0) return Rational{0};
  return make_rational(m.diagonal_count(), m.degree());
}

}  // namespace soficperm
