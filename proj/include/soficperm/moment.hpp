#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "soficperm/partition.hpp"
#include "soficperm/perm.hpp"
#include "soficperm/rational.hpp"

namespace soficperm {

/// The word B_1 (U B_2 U*) B_3 (U B_4 U*) ... B_{2n-1} (U B_{2n} U*):
/// odd positions stay outside, even positions are conjugated by U.
struct MomentSpec {
  std::size_t degree = 0;
  std::vector<SubPermMatrix> matrices;

  std::size_t half_length() const { return matrices.size() / 2; }
  /// Throws InputError unless the list is nonempty, even, and all of `degree`.
  void validate() const;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;
inline constexpr std::size_t kBruteForceMaxDegree = 8;

struct EngineConfig {
  /// Upper limit on d^{4n} for exact enumeration.
  std::uint64_t budget = kDefaultBudget;
  unsigned workers = 1;
};

/// (d - blocks)! / d!, or 0 when blocks > d.
Rational weingarten_weight(std::size_t blocks, std::size_t d);

/// E[tr_d(word)] over uniform U, exactly, through the index-tuple expansion
/// with the r == s integration rule. Throws BudgetExceeded when d^{4n} is
/// over the configured budget.
Rational exact_moment(const MomentSpec& spec, const EngineConfig& cfg = {});

/// Average of tr_d(word) over all d! permutations. d <= 8.
Rational brute_force_moment(const MomentSpec& spec);

/// Number of diagonal entries of the word for U = matrix(sigma).
std::size_t word_trace_count(const MomentSpec& spec, std::span<const std::uint32_t> sigma,
                             std::span<const std::uint32_t> sigma_inv);

struct McEstimate {
  double mean = 0;
  double std_error = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Mean and plug-in standard error of a list of per-sample values.
McEstimate summarize_samples(std::span<const double> values);

/// Monte Carlo over `samples` uniform permutations. Sample i draws from
/// derive_seed(seed, {i}), so results do not depend on `workers`.
McEstimate mc_moment(const MomentSpec& spec, std::size_t samples, std::uint64_t seed,
                     unsigned workers = 1);

/// Number of index tuples i in [d]^{2m} with delta_{i,p} = 1 and
/// b^{(1)}_{i_1 i_2} ... b^{(m)}_{i_{2m-1} i_{2m}} = 1. p lives on 2m points.
/// Factorizes over the blocks of p v eta; each block costs O(d * |block|).
Integer s_sum(const Partition& p, std::span<const SubPermMatrix> matrices, std::size_t d);

/// max_j tr_d(B_j).
Rational max_normalized_trace(std::span<const SubPermMatrix> matrices);

/// 2^{2n} Bell(2n): the C_n = D_n used by the closed-form bound.
Integer bound_constant(std::size_t n);

struct BoundReport {
  std::size_t d = 0;
  std::size_t n = 0;
  std::optional<Rational> exact;  // when within budget
  Rational paper_bound;           // 2^{2n} sum_r d^{-|r|-1} S(p(r), d)
  Rational cn_dn_bound;           // C_n f(d) + D_n / d
  Rational f_of_d;
  Integer cn;                     // == D_n

  /// exact <= paper_bound <= cn_dn_bound (exact skipped when absent).
  bool ordered() const;
};

/// Throws InputError when d < 4n, BudgetExceeded when 2n > 8.
BoundReport paper_bound(const MomentSpec& spec, const EngineConfig& cfg = {},
                        bool with_exact = true);

}  // namespace soficperm
