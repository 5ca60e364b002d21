#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soficperm/free_word.hpp"
#include "soficperm/group.hpp"
#include "soficperm/moment.hpp"
#include "soficperm/perm.hpp"
#include "soficperm/rational.hpp"

namespace soficperm {

using FamilyIndex = Element;

/// How B_{j1} B_{j2} relates to the family.
struct ProductRule {
  enum class Kind { exact, near_identity, none };
  Kind kind = Kind::none;
  FamilyIndex index;  // meaningful for Kind::exact
};

/// Full permutations B_{j,d} indexed by a set J, one per degree d.
class DeterministicFamily {
 public:
  using Builder = std::function<Permutation(const FamilyIndex&, std::size_t)>;
  using Rule = std::function<ProductRule(const FamilyIndex&, const FamilyIndex&)>;
  using Membership = std::function<bool(const FamilyIndex&)>;

  /// `indices` is the finite part of J that sweeps iterate over; `member`
  /// decides membership in all of J and defaults to `indices`.
  DeterministicFamily(std::string name, std::vector<FamilyIndex> indices, Builder builder, Rule rule,
                      Membership member = {});

  const std::string& name() const { return name_; }
  const std::vector<FamilyIndex>& indices() const { return indices_; }
  bool contains(const FamilyIndex& j) const;
  /// Throws DomainError for indices outside J.
  Permutation matrix(const FamilyIndex& j, std::size_t d) const;
  /// The declared closure rule; verify_family checks it.
  ProductRule product(const FamilyIndex& j1, const FamilyIndex& j2) const;

  /// B_j = (k -> k + j mod d), j in `powers` (nonzero).
  static DeterministicFamily cycle_powers(std::vector<std::int64_t> powers);
  /// The single element k -> k + d/2 mod d (d even).
  static DeterministicFamily half_shift();
  /// Truncated translation of Z on {0..d-1} with reflected wrap, j in `shifts`.
  static DeterministicFamily integer_shifts(std::vector<std::int64_t> shifts);
  /// Images of the reduced words of length 1..radius of F_2 under the
  /// homomorphism sending the generators to permutations drawn from `seed`.
  static DeterministicFamily free_group_images(std::uint64_t seed, std::size_t radius);
  /// B_j = transposition (2j 2j+1), j = 0..count-1.
  static DeterministicFamily transpositions(std::size_t count);
  /// Explicit permutations per (index, degree); closure is searched exactly.
  static DeterministicFamily from_table(std::map<std::int64_t, std::map<std::size_t, Permutation>> table);

 private:
  std::string name_;
  std::vector<FamilyIndex> indices_;
  Builder builder_;
  Rule rule_;
  Membership member_;
};

struct TraceTrajectory {
  FamilyIndex index;
  std::vector<Rational> traces;  // one per d
  bool vanishing = false;
};

struct PairTrajectory {
  FamilyIndex first, second;
  ProductRule declared;
  std::vector<Rational> dist_to_identity;  // dist(B1 B2, id)
  std::vector<bool> exact_match;           // B1 B2 == B_{declared.index}
  bool closed = false;
};

struct FamilyReport {
  std::vector<std::size_t> degrees;
  std::vector<TraceTrajectory> traces;
  std::vector<PairTrajectory> pairs;
  bool traces_ok = false;
  bool closure_ok = false;
};

/// A trajectory "tends to 0" here when it is non-increasing and either
/// already 0 at the end or strictly below its start.
bool trends_to_zero(std::span<const Rational> values);

FamilyReport verify_family(const DeterministicFamily& fam, std::span<const std::size_t> degrees);

/// w_0 B_{j1} w_1 ... B_{jn} w_n.
struct MixedMomentSpec {
  std::vector<FreeWord> words;       // n + 1 entries
  std::vector<FamilyIndex> blocks;   // n entries

  std::size_t generator_span() const;
  /// Throws InputError unless words.size() == blocks.size() + 1, the inner
  /// words are nontrivial after reduction, and w_0 is nontrivial when n == 0.
  void validate() const;
};

enum class MixedForm { pure_word, pure_block, alternating };

std::string to_string(MixedForm f);

/// Cyclic pattern B_{blocks[0]} connectives[0] B_{blocks[1]} connectives[1] ...;
/// for pure_word, blocks is empty and connectives holds the single word.
struct ReducedMixed {
  MixedForm form = MixedForm::pure_word;
  std::vector<FreeWord> connectives;
  std::vector<FamilyIndex> blocks;
  /// Pairs B_{j1} B_{j2} replaced by the identity under the near-identity rule.
  std::size_t approximations = 0;
};

/// Moves w_n around to w_0 and merges adjacent blocks using the family's
/// product rule. Throws ClosureViolation on a pair with no rule.
ReducedMixed cyclic_reduce_mixed(const MixedMomentSpec& spec, const DeterministicFamily& fam);

struct DecayPoint {
  std::size_t d = 0;
  McEstimate estimate;
};

using DecayTrajectory = std::vector<DecayPoint>;

/// E[tr_d(w(U))] by Monte Carlo. Degree d uses the stream key
/// derive_seed(seed, {d}) (reported as the estimate's seed); sample i draws
/// every U_k from derive_seed(that key, {i}). Throws InputError for a
/// trivial word.
DecayTrajectory nica_decay(const FreeWord& w, std::span<const std::size_t> degrees, std::size_t samples,
                           std::uint64_t seed, unsigned workers = 1);

/// E[tr_d(w_0(U) B_{j1} w_1(U) ... B_{jn} w_n(U))].
DecayTrajectory mixed_decay(const MixedMomentSpec& spec, const DeterministicFamily& fam,
                            std::span<const std::size_t> degrees, std::size_t samples, std::uint64_t seed,
                            unsigned workers = 1);

/// The conjugated estimator on the reduced form, keyed by derive_seed(seed, {d, 1}):
/// E[tr_d(B_{j1} V c_1(U) V* B_{j2} V c_2(U) V* ...)] with V independent of U.
DecayTrajectory mixed_decay_conjugated(const ReducedMixed& form, const DeterministicFamily& fam,
                                       std::span<const std::size_t> degrees, std::size_t samples,
                                       std::uint64_t seed, unsigned workers = 1);

struct DecayVerdict {
  bool monotone = false;     // each step rises by at most 2 combined std errors
  bool final_small = false;  // |last estimate| <= threshold
  bool pass() const { return monotone && final_small; }
};

DecayVerdict assess_decay(const DecayTrajectory& traj, double threshold);

/// Whether two estimates agree within `sigmas` combined std errors.
bool agree_within(const McEstimate& a, const McEstimate& b, double sigmas);

}  // namespace soficperm
