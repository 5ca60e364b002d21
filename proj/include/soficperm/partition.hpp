#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace soficperm {

/// Set partition of {0, ..., m-1} in restricted-growth form: block_id[0] == 0
/// and each new block id is one more than the largest seen so far. Two
/// partitions are equal iff their arrays are equal.
class Partition {
 public:
  Partition() = default;

  /// Accepts any labelling (equal labels = same block) and canonicalizes it.
  static Partition from_labels(std::span<const int> labels);
  /// Throws InputError if `rgs` is not already a restricted-growth string.
  static Partition from_rgs(std::vector<int> rgs);
  static Partition singletons(std::size_t m);
  static Partition one_block(std::size_t m);

  std::size_t ground_size() const { return block_id_.size(); }
  std::size_t block_count() const { return blocks_; }
  int block_of(std::size_t k) const { return block_id_[k]; }
  bool same_block(std::size_t a, std::size_t b) const { return block_id_[a] == block_id_[b]; }
  std::span<const int> rgs() const { return block_id_; }
  std::vector<std::vector<std::size_t>> blocks() const;

  /// Every block of *this lies inside a block of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition& a, const Partition& b) {
    return a.block_id_ <=> b.block_id_;
  }

 private:
  std::vector<int> block_id_;
  std::size_t blocks_ = 0;
};

Partition join(const Partition& a, const Partition& b);
Partition meet(const Partition& a, const Partition& b);

/// Bell numbers B_0..B_25 via the Bell triangle.
std::uint64_t bell_number(std::size_t m);

inline constexpr std::size_t kMaxEnumerationSize = 12;

/// Streams every partition of {0..m-1} once, in restricted-growth-string
/// (lexicographic) order. Single consumer.
class PartitionEnumerator {
 public:
  /// Throws InputError if m == 0 or m > kMaxEnumerationSize.
  explicit PartitionEnumerator(std::size_t m);
  /// Next partition, or nullopt when exhausted.
  std::optional<Partition> next();

 private:
  std::vector<int> rgs_;
  std::vector<int> max_prefix_;
  bool started_ = false;
  bool done_ = false;
};

std::vector<Partition> all_partitions(std::size_t m);

// The special partitions and index maps below are written with 1-based
// points, the way the pairings are usually drawn; the returned Partitions
// are ordinary 0-based objects (point k is stored at index k-1).

/// {{1,2},{3,4},...,{2n-1,2n}} on 2n points.
Partition eta(std::size_t n);
/// {{2n,1},{2,3},{4,5},...,{2n-2,2n-1}} on 2n points.
Partition eta_prime(std::size_t n);
/// {{1,2},{3,4},...,{4n-1,4n}} on 4n points.
Partition gamma(std::size_t n);

/// Row/column positions of the 2n random factors inside a length-4n index
/// tuple. f(j) is the row index position, g(j) the column index position.
struct IndexMapPair {
  std::size_t n = 0;
  std::vector<std::size_t> f;  // f[j-1] in 1..4n
  std::vector<std::size_t> g;  // g[j-1] in 1..4n

  /// Generates f, g from their case formulas and checks them against the
  /// explicit first and last table columns; throws std::logic_error on drift.
  static IndexMapPair build(std::size_t n);
};

/// p(r) on 4n points: the blocks f(X) and g(X) for every block X of r.
Partition lift_p_of_r(const Partition& r, const IndexMapPair& maps);

/// True iff 2j-1 and 2j (1-based) lie in different blocks of r for every j.
bool no_matched_pair(const Partition& r);

/// Cyclic adjacency free: j-1 !~ j for j = 2..2n and 1 !~ 2n.
bool cyclic_adjacency_free(const Partition& r);

/// |r v eta| <= |r| / 2. Throws HypothesisViolation if some pair 2j-1 ~ 2j.
bool check_lemma22(const Partition& r);

struct RsCheck {
  bool rs1 = false;            // |r v eta'| + |r v eta| <= |r| + 1
  bool rnopair_holds = false;  // cyclic_adjacency_free(r)
  std::optional<bool> rs0;     // |r v eta'| + |r v eta| <= |r|, only under rnopair
  std::size_t join_eta = 0;
  std::size_t join_eta_prime = 0;
};

RsCheck check_rs_inequalities(const Partition& r);

struct LemmaScan {
  std::size_t ground_size = 0;
  std::uint64_t partitions = 0;
  std::uint64_t rs1_failures = 0;
  std::uint64_t rnopair_cases = 0;
  std::uint64_t rs0_failures = 0;
  std::uint64_t lemma22_cases = 0;
  std::uint64_t lemma22_failures = 0;
  bool ok() const { return rs1_failures == 0 && rs0_failures == 0 && lemma22_failures == 0; }
};

/// Runs all three partition inequalities over every r in P(two_n).
LemmaScan scan_partition_lemmas(std::size_t two_n);

}  // namespace soficperm
