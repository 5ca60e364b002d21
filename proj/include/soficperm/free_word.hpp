#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soficperm/perm.hpp"

namespace soficperm {

/// A word in generators x1, x2, ...; letter (i, +1) is x_{i+1}, (i, -1) its inverse.
class FreeWord {
 public:
  struct Letter {
    std::size_t generator;
    int exponent;  // +1 or -1
    friend bool operator==(const Letter&, const Letter&) = default;
  };

  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters);

  /// "x1 x2^-1 x1^3"; "" and "e" give the empty word. Powers are expanded.
  static FreeWord parse(const std::string& text);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  bool is_reduced() const;
  /// One more than the largest generator index used; 0 for the empty word.
  std::size_t generator_span() const;

  FreeWord reduced() const;
  FreeWord inverse() const;
  FreeWord operator*(const FreeWord& rhs) const;
  std::string to_string() const;

  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Matrix of w(U): the product of the letters' matrices, left to right.
Permutation evaluate(const FreeWord& w, std::span<const Permutation> generators);

/// Same, with the inverses supplied to avoid recomputing them.
Permutation evaluate(const FreeWord& w, std::span<const Permutation> generators,
                     std::span<const Permutation> inverses);

}  // namespace soficperm
