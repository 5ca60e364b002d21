#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace soficperm {

/// Canonical normal form of a group element. What the integers mean is up
/// to the group: a coordinate vector for Z^k, a residue for Z/m, an image
/// array for S_n, a reduced word of signed generator numbers for F_k.
using Element = std::vector<std::int64_t>;

std::string format_element(const Element& e);

/// A finitely generated group with a decidable word problem. Elements are
/// always in normal form, so equality is vector equality.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string name() const = 0;
  virtual nlohmann::json descriptor() const = 0;
  virtual std::size_t generator_count() const = 0;
  virtual Element generator(std::size_t i) const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  /// Throws InputError if `a` is not a normal form of this group.
  virtual void validate(const Element& a) const = 0;

  /// All elements, for finite groups.
  virtual std::optional<std::vector<Element>> elements() const { return std::nullopt; }
  bool is_finite() const { return elements().has_value(); }

  /// Word length; the default runs a breadth-first search up to `cap`.
  virtual std::optional<std::size_t> word_length(const Element& a, std::size_t cap = 64) const;

  /// For Z^k: the box [-L, L]^k; for finite groups: everything. Other
  /// groups have no built-in Folner sequence and return nullopt.
  virtual std::optional<std::vector<Element>> folner_box(std::size_t L) const;

  Element power(const Element& a, std::int64_t k) const;
  bool is_identity(const Element& a) const { return a == identity(); }

  /// Elements of word length <= radius, sorted by (length, normal form).
  std::vector<Element> ball(std::size_t radius) const;

  /// Parses "g1 g2^-1 g1^3" (generators g1..gk, "e" or "" for the identity).
  Element parse_word(const std::string& word) const;
};

using GroupPtr = std::shared_ptr<const Group>;

/// Z^k (k = 1 is the integers). Generators are the unit vectors.
class IntegerLattice final : public Group {
 public:
  explicit IntegerLattice(std::size_t rank);
  std::string name() const override;
  nlohmann::json descriptor() const override;
  std::size_t generator_count() const override { return rank_; }
  Element generator(std::size_t i) const override;
  Element identity() const override { return Element(rank_, 0); }
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  void validate(const Element& a) const override;
  std::optional<std::size_t> word_length(const Element& a, std::size_t cap) const override;
  std::optional<std::vector<Element>> folner_box(std::size_t L) const override;
  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

/// Z/m; m = 1 is the trivial group (no generators).
class CyclicGroup final : public Group {
 public:
  explicit CyclicGroup(std::int64_t order);
  std::string name() const override;
  nlohmann::json descriptor() const override;
  std::size_t generator_count() const override { return order_ > 1 ? 1 : 0; }
  Element generator(std::size_t i) const override;
  Element identity() const override { return {0}; }
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  void validate(const Element& a) const override;
  std::optional<std::vector<Element>> elements() const override;
  std::optional<std::size_t> word_length(const Element& a, std::size_t cap) const override;
  std::int64_t order() const { return order_; }

 private:
  std::int64_t order_;
};

/// S_n on {0..n-1}, generated by the transposition (0 1) and the n-cycle.
/// Elements are image arrays; multiply(a, b) = a o b.
class SymmetricGroup final : public Group {
 public:
  explicit SymmetricGroup(std::size_t degree);
  std::string name() const override;
  nlohmann::json descriptor() const override;
  std::size_t generator_count() const override;
  Element generator(std::size_t i) const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  void validate(const Element& a) const override;
  std::optional<std::vector<Element>> elements() const override;

 private:
  std::size_t degree_;
};

/// F_k. Elements are freely reduced words; letter +i / -i (i >= 1) is the
/// i-th generator or its inverse.
class FreeGroup final : public Group {
 public:
  explicit FreeGroup(std::size_t rank);
  std::string name() const override;
  nlohmann::json descriptor() const override;
  std::size_t generator_count() const override { return rank_; }
  Element generator(std::size_t i) const override;
  Element identity() const override { return {}; }
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  void validate(const Element& a) const override;
  std::optional<std::size_t> word_length(const Element& a, std::size_t cap) const override;

 private:
  std::size_t rank_;
};

/// From {"type": "integers" | "lattice" | "cyclic" | "trivial" | "symmetric" | "free", ...}.
GroupPtr make_group(const nlohmann::json& descriptor);

/// Element from JSON: a word string, or a normal-form array.
Element element_from_json(const Group& g, const nlohmann::json& j);

}  // namespace soficperm
