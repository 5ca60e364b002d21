#include "doctest.h"
#include "support.hpp"

#include <numeric>
#include <set>

#include "soficperm/errors.hpp"
#include "soficperm/partition.hpp"

using namespace soficperm;
using testsupport::random_partition;

namespace {

// 1-based blocks, as written on paper.
Partition from_blocks(std::size_t m, std::initializer_list<std::initializer_list<int>> blocks) {
  std::vector<int> labels(m, -1);
  int b = 0;
  for (const auto& block : blocks) {
    for (int k : block) labels[k - 1] = b;
    ++b;
  }
  return Partition::from_labels(labels);
}

// Union-find join, independent of the library's.
Partition naive_join(const Partition& a, const Partition& b) {
  const std::size_t m = a.ground_size();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      if (a.same_block(x, y) || b.same_block(x, y)) parent[find(x)] = find(y);
  std::vector<int> labels(m);
  for (std::size_t x = 0; x < m; ++x) labels[x] = find(x);
  return Partition::from_labels(labels);
}

Partition naive_meet(const Partition& a, const Partition& b) {
  std::vector<int> labels(a.ground_size());
  for (std::size_t x = 0; x < labels.size(); ++x)
    labels[x] = a.block_of(x) * static_cast<int>(labels.size()) + b.block_of(x);
  return Partition::from_labels(labels);
}

// Stirling numbers of the second kind, summed.
std::uint64_t bell_oracle(std::size_t m) {
  std::vector<std::vector<std::uint64_t>> S(m + 1, std::vector<std::uint64_t>(m + 1, 0));
  S[0][0] = 1;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t k = 1; k <= i; ++k) S[i][k] = k * S[i - 1][k] + S[i - 1][k - 1];
  return std::accumulate(S[m].begin(), S[m].end(), std::uint64_t{0});
}

// Row and column index positions of the 2n Haar factors, read off by
// walking Tr(B1 U B2 U^T ... B2n U^T) factor by factor. Index x_k sits
// between factor k and k+1; the pair tuple uses i_{k+1} = x_k.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> walk_expansion(std::size_t n) {
  const std::size_t len = 4 * n;
  std::vector<std::size_t> rows, cols;
  for (std::size_t factor = 0; factor < len; ++factor) {
    if (factor % 2 == 0) continue;  // a B factor
    const std::size_t left = factor + 1;              // 1-based position of x_factor
    const std::size_t right = (factor + 1) % len + 1;  // x_{factor+1}, cyclic
    const bool transposed = (factor / 2) % 2 == 1;
    rows.push_back(transposed ? right : left);
    cols.push_back(transposed ? left : right);
  }
  return {rows, cols};
}

}  // namespace

TEST_CASE("join examples") {
  const auto p = from_blocks(4, {{1, 3}, {2}, {4}});
  CHECK(join(Partition::singletons(4), p) == p);
  CHECK(join(p, Partition::one_block(4)) == Partition::one_block(4));
  CHECK(join(from_blocks(4, {{1, 2}, {3}, {4}}), from_blocks(4, {{2, 3}, {1}, {4}})) ==
        from_blocks(4, {{1, 2, 3}, {4}}));
}

TEST_CASE("meet examples") {
  const auto p = from_blocks(4, {{1, 4}, {2, 3}});
  CHECK(meet(p, Partition::one_block(4)) == p);
  CHECK(meet(p, p) == p);
  CHECK(meet(from_blocks(4, {{1, 2, 3}, {4}}), from_blocks(4, {{1, 2}, {3, 4}})) ==
        from_blocks(4, {{1, 2}, {3}, {4}}));
}

TEST_CASE("lattice laws on random partitions") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t m = 1 + rep % 10;
    const auto a = random_partition(m, rng), b = random_partition(m, rng), c = random_partition(m, rng);
    CHECK(join(a, b) == naive_join(a, b));
    CHECK(meet(a, b) == naive_meet(a, b));
    CHECK(join(a, b) == join(b, a));
    CHECK(meet(a, b) == meet(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
    CHECK(meet(meet(a, b), c) == meet(a, meet(b, c)));
    CHECK(join(a, a) == a);
    CHECK(meet(a, a) == a);
    CHECK(join(a, meet(a, b)) == a);
    CHECK(meet(a, join(a, b)) == a);
    CHECK(join(a, b).block_count() <= std::min(a.block_count(), b.block_count()));
    CHECK(meet(a, b).block_count() >= std::max(a.block_count(), b.block_count()));
    CHECK(a.refines(join(a, b)));
    CHECK(meet(a, b).refines(a));
  }
}

TEST_CASE("restricted growth strings are canonical") {
  const std::vector<int> labels{7, 3, 7, 9};
  const auto p = Partition::from_labels(labels);
  CHECK(std::vector<int>(p.rgs().begin(), p.rgs().end()) == std::vector<int>{0, 1, 0, 2});
  CHECK_THROWS_AS(Partition::from_rgs({1, 0}), InputError);
  CHECK_THROWS_AS(Partition::from_rgs({0, 2}), InputError);
}

TEST_CASE("special partitions for n = 1") {
  CHECK(eta(1) == from_blocks(2, {{1, 2}}));
  CHECK(eta_prime(1) == from_blocks(2, {{1, 2}}));
  CHECK(soficperm::gamma(1) == from_blocks(4, {{1, 2}, {3, 4}}));
  CHECK(eta_prime(3) == from_blocks(6, {{6, 1}, {2, 3}, {4, 5}}));
  CHECK(soficperm::gamma(2) == from_blocks(8, {{1, 2}, {3, 4}, {5, 6}, {7, 8}}));
}

TEST_CASE("index maps for n = 1") {
  const auto maps = IndexMapPair::build(1);
  CHECK(maps.f == std::vector<std::size_t>{2, 1});
  CHECK(maps.g == std::vector<std::size_t>{3, 4});
}

TEST_CASE("index maps agree with the expansion walk") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto maps = IndexMapPair::build(n);
    const auto [rows, cols] = walk_expansion(n);
    CHECK(maps.f == rows);
    CHECK(maps.g == cols);
    std::set<std::size_t> all(maps.f.begin(), maps.f.end());
    all.insert(maps.g.begin(), maps.g.end());
    CHECK(all.size() == 4 * n);
  }
}

TEST_CASE("lift of r") {
  const auto maps = IndexMapPair::build(1);
  CHECK(lift_p_of_r(from_blocks(2, {{1, 2}}), maps) == from_blocks(4, {{1, 2}, {3, 4}}));
  CHECK(lift_p_of_r(Partition::singletons(2), maps) == Partition::singletons(4));

  std::mt19937_64 rng(12);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto m = IndexMapPair::build(n);
    for (int rep = 0; rep < 50; ++rep) {
      const auto r = random_partition(2 * n, rng), r2 = random_partition(2 * n, rng);
      const auto p = lift_p_of_r(r, m);
      CHECK(p.block_count() == 2 * r.block_count());
      for (std::size_t a = 0; a < 2 * n; ++a)
        for (std::size_t b = 0; b < 2 * n; ++b) {
          CHECK(p.same_block(m.f[a] - 1, m.f[b] - 1) == r.same_block(a, b));
          CHECK(p.same_block(m.g[a] - 1, m.g[b] - 1) == r.same_block(a, b));
          CHECK_FALSE(p.same_block(m.f[a] - 1, m.g[b] - 1));
        }
      const auto coarser = join(r, r2);
      CHECK(p.refines(lift_p_of_r(coarser, m)));
    }
  }
}

TEST_CASE("enumeration counts") {
  CHECK(all_partitions(1).size() == 1);
  CHECK(all_partitions(4).size() == 15);
  CHECK(all_partitions(8).size() == 4140);
  for (std::size_t m = 1; m <= 10; ++m) CHECK(bell_number(m) == bell_oracle(m));
  CHECK_THROWS_AS(PartitionEnumerator(0), InputError);
}

TEST_CASE("enumeration matches canonicalized labellings") {
  for (std::size_t m = 1; m <= 6; ++m) {
    std::set<Partition> oracle;
    std::vector<int> labels(m, 0);
    while (true) {
      oracle.insert(Partition::from_labels(labels));
      std::size_t k = 0;
      while (k < m && labels[k] == static_cast<int>(m) - 1) labels[k++] = 0;
      if (k == m) break;
      ++labels[k];
    }
    const auto listed = all_partitions(m);
    CHECK(std::set<Partition>(listed.begin(), listed.end()) == oracle);
    CHECK(listed.size() == oracle.size());
    CHECK(std::is_sorted(listed.begin(), listed.end()));
  }
}

TEST_CASE("pair lemma") {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto s = Partition::singletons(2 * n);
    CHECK(check_lemma22(s));
    CHECK(join(s, eta(n)).block_count() == n);
  }
  CHECK_THROWS_AS(check_lemma22(from_blocks(4, {{1, 2}, {3}, {4}})), HypothesisViolation);
}

TEST_CASE("rs inequalities on the top element") {
  const auto rc = check_rs_inequalities(Partition::one_block(4));
  CHECK(rc.rs1);
  CHECK(rc.join_eta == 1);
  CHECK(rc.join_eta_prime == 1);
}

TEST_CASE("exhaustive partition inequalities") {
  for (std::size_t two_n : {2u, 4u, 6u, 8u}) {
    const std::size_t n = two_n / 2;
    std::uint64_t nopair = 0, failures = 0;
    for (const auto& r : all_partitions(two_n)) {
      const auto je = naive_join(r, eta(n)).block_count();
      const auto jp = naive_join(r, eta_prime(n)).block_count();
      const auto rc = check_rs_inequalities(r);
      CHECK(rc.join_eta == je);
      CHECK(rc.join_eta_prime == jp);
      failures += je + jp > r.block_count() + 1;
      bool adjacency_free = !r.same_block(0, two_n - 1);
      for (std::size_t j = 1; j < two_n; ++j) adjacency_free = adjacency_free && !r.same_block(j - 1, j);
      CHECK(rc.rnopair_holds == adjacency_free);
      if (adjacency_free) failures += je + jp > r.block_count();
      bool matched = false;
      for (std::size_t j = 0; j < n; ++j) matched = matched || r.same_block(2 * j, 2 * j + 1);
      CHECK(no_matched_pair(r) == !matched);
      if (!matched) {
        failures += 2 * je > r.block_count();
        CHECK(check_lemma22(r));
      }
    }
    CHECK(failures == 0);
    const auto scan = scan_partition_lemmas(two_n);
    CHECK(scan.ok());
    CHECK(scan.partitions == bell_oracle(two_n));
  }
}
