#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "soficperm/group.hpp"
#include "soficperm/perm.hpp"
#include "soficperm/rational.hpp"

namespace soficperm {

/// A map from a finite set of group elements into Sym(n).
class QuasiAction {
 public:
  QuasiAction() = default;
  /// Throws InputError on mixed degrees or elements that are not normal forms.
  QuasiAction(GroupPtr group, std::size_t degree, std::map<Element, Permutation> table);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  std::size_t degree() const { return degree_; }
  bool contains(const Element& g) const { return table_.contains(g); }
  /// Throws DomainError outside the domain.
  const Permutation& at(const Element& g) const;
  std::vector<Element> domain() const;
  const std::map<Element, Permutation>& table() const { return table_; }

  /// Left translation of a finite group on itself; point k is elements()[k].
  static QuasiAction regular(GroupPtr finite_group);

  /// phi(g) = image of g under the homomorphism sending generator i to
  /// generator_images[i], tabulated on `domain`.
  static QuasiAction from_generator_images(GroupPtr group, std::vector<Permutation> generator_images,
                                           std::span<const Element> domain);

  /// Points not covered by x -> x + g on {0..n-1} are matched to the
  /// uncovered targets in ascending order (cyclic) or descending order
  /// (reflect).
  enum class Wrap { cyclic, reflect };
  /// The integers acting on {0..n-1} by truncated translation, tabulated on
  /// [-domain_radius, domain_radius].
  static QuasiAction truncated_shift(std::size_t n, std::size_t domain_radius, Wrap wrap);

  /// phi(g) (x) id_{factor}: point x*factor + a -> phi(g)(x)*factor + a.
  QuasiAction amplify(std::size_t factor) const;

 private:
  GroupPtr group_;
  std::size_t degree_ = 0;
  std::map<Element, Permutation> table_;
};

/// Completes a partial injection (kEmpty = undefined) to a permutation by
/// sending the unmatched sources, in ascending order, to the unmatched
/// targets in ascending order.
Permutation complete_partial_injection(std::span<const std::int64_t> partial);

struct DefectReport {
  /// max over g1, g2 in F of dist(phi(g1^{-1} g2), phi(g1)^{-1} phi(g2)).
  Rational multiplicativity_defect{0};
  /// max over g in F \ {e} of 1 - dist(phi(g), id).
  Rational freeness_defect{0};

  Rational worst() const { return std::max(multiplicativity_defect, freeness_defect); }
};

/// Exact maxima over F x F. Every g1^{-1} g2 must lie in the domain.
DefectReport measure_defect(const QuasiAction& qa, std::span<const Element> F, unsigned workers = 1);

/// |K F \ F| / |F|.
Rational folner_defect(const Group& G, std::span<const Element> K, std::span<const Element> F);

/// Sofic approximation data along a sequence of quasi-actions.
struct WitnessStep {
  std::size_t degree = 0;
  DefectReport defect;
  std::vector<Rational> dist_to_identity;  // one per target
};

struct SoficWitness {
  std::vector<Element> targets;
  std::vector<WitnessStep> steps;
  /// Defects non-increasing, distances non-decreasing, and either the
  /// defects already vanish or the last step improves on the first.
  bool trend_ok = false;
};

/// Defects are measured on F = targets + {e}. Throws InputError when `seq`
/// is empty.
SoficWitness assemble_witness(std::span<const QuasiAction> seq, std::span<const Element> targets);

}  // namespace soficperm
