#include "soficperm/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "soficperm/errors.hpp"

namespace soficperm {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

void require_same_size(const Partition& a, const Partition& b, const char* op) {
  if (a.ground_size() != b.ground_size())
    throw InputError(std::string(op) + ": ground sizes differ (" + std::to_string(a.ground_size()) +
                     " vs " + std::to_string(b.ground_size()) + ")");
}

Partition from_pairs_1based(std::size_t m, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<int> labels(m);
  for (const auto& [a, b] : pairs) {
    labels[a - 1] = static_cast<int>(a);
    labels[b - 1] = static_cast<int>(a);
  }
  return Partition::from_labels(labels);
}

}  // namespace

Partition Partition::from_labels(std::span<const int> labels) {
  Partition p;
  p.block_id_.resize(labels.size());
  std::vector<std::pair<int, int>> seen;  // label -> block id
  for (std::size_t k = 0; k < labels.size(); ++k) {
    auto it = std::find_if(seen.begin(), seen.end(), [&](auto& s) { return s.first == labels[k]; });
    if (it == seen.end()) {
      seen.emplace_back(labels[k], static_cast<int>(seen.size()));
      p.block_id_[k] = static_cast<int>(seen.size() - 1);
    } else {
      p.block_id_[k] = it->second;
    }
  }
  p.blocks_ = seen.size();
  return p;
}

Partition Partition::from_rgs(std::vector<int> rgs) {
  int next = 0;
  for (int v : rgs) {
    if (v < 0 || v > next) throw InputError("not a restricted-growth string");
    if (v == next) ++next;
  }
  Partition p;
  p.block_id_ = std::move(rgs);
  p.blocks_ = static_cast<std::size_t>(next);
  return p;
}

Partition Partition::singletons(std::size_t m) {
  Partition p;
  p.block_id_.resize(m);
  std::iota(p.block_id_.begin(), p.block_id_.end(), 0);
  p.blocks_ = m;
  return p;
}

Partition Partition::one_block(std::size_t m) {
  Partition p;
  p.block_id_.assign(m, 0);
  p.blocks_ = m == 0 ? 0 : 1;
  return p;
}

std::vector<std::vector<std::size_t>> Partition::blocks() const {
  std::vector<std::vector<std::size_t>> out(blocks_);
  for (std::size_t k = 0; k < block_id_.size(); ++k) out[block_id_[k]].push_back(k);
  return out;
}

bool Partition::refines(const Partition& coarser) const {
  require_same_size(*this, coarser, "refines");
  std::vector<int> image(blocks_, -1);
  for (std::size_t k = 0; k < block_id_.size(); ++k) {
    auto& slot = image[block_id_[k]];
    if (slot == -1)
      slot = coarser.block_id_[k];
    else if (slot != coarser.block_id_[k])
      return false;
  }
  return true;
}

Partition join(const Partition& a, const Partition& b) {
  require_same_size(a, b, "join");
  const std::size_t m = a.ground_size();
  UnionFind uf(m);
  std::vector<int> first_a(a.block_count(), -1), first_b(b.block_count(), -1);
  for (std::size_t k = 0; k < m; ++k) {
    auto& fa = first_a[a.block_of(k)];
    if (fa < 0) fa = static_cast<int>(k); else uf.unite(fa, k);
    auto& fb = first_b[b.block_of(k)];
    if (fb < 0) fb = static_cast<int>(k); else uf.unite(fb, k);
  }
  std::vector<int> labels(m);
  for (std::size_t k = 0; k < m; ++k) labels[k] = static_cast<int>(uf.find(k));
  return Partition::from_labels(labels);
}

Partition meet(const Partition& a, const Partition& b) {
  require_same_size(a, b, "meet");
  const std::size_t m = a.ground_size();
  std::vector<int> labels(m);
  const int stride = static_cast<int>(b.block_count()) + 1;
  for (std::size_t k = 0; k < m; ++k) labels[k] = a.block_of(k) * stride + b.block_of(k);
  return Partition::from_labels(labels);
}

std::uint64_t bell_number(std::size_t m) {
  if (m > 25) throw InputError("bell_number: m too large for 64 bits");
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

PartitionEnumerator::PartitionEnumerator(std::size_t m) {
  if (m == 0) throw InputError("enumerate_partitions: m must be >= 1");
  if (m > kMaxEnumerationSize)
    throw InputError("enumerate_partitions: m = " + std::to_string(m) + " exceeds cap " +
                     std::to_string(kMaxEnumerationSize));
  rgs_.assign(m, 0);
  max_prefix_.assign(m, 0);
}

std::optional<Partition> PartitionEnumerator::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return Partition::from_rgs(rgs_);
  }
  // max_prefix_[k] = max(rgs_[0..k-1]); position k may grow up to it + 1.
  const std::size_t m = rgs_.size();
  std::size_t k = m;
  while (k-- > 1) {
    if (rgs_[k] <= max_prefix_[k]) {
      ++rgs_[k];
      for (std::size_t j = k + 1; j < m; ++j) {
        rgs_[j] = 0;
        max_prefix_[j] = std::max(max_prefix_[j - 1], rgs_[j - 1]);
      }
      return Partition::from_rgs(rgs_);
    }
  }
  done_ = true;
  return std::nullopt;
}

std::vector<Partition> all_partitions(std::size_t m) {
  std::vector<Partition> out;
  PartitionEnumerator e(m);
  while (auto p = e.next()) out.push_back(std::move(*p));
  return out;
}

Partition eta(std::size_t n) {
  if (n < 1) throw InputError("eta: n must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 1; j <= n; ++j) pairs.emplace_back(2 * j - 1, 2 * j);
  return from_pairs_1based(2 * n, pairs);
}

Partition eta_prime(std::size_t n) {
  if (n < 1) throw InputError("eta_prime: n must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> pairs{{1, 2 * n}};
  for (std::size_t j = 1; j < n; ++j) pairs.emplace_back(2 * j, 2 * j + 1);
  return from_pairs_1based(2 * n, pairs);
}

Partition gamma(std::size_t n) {
  if (n < 1) throw InputError("gamma: n must be >= 1");
  return eta(2 * n);
}

IndexMapPair IndexMapPair::build(std::size_t n) {
  if (n < 1) throw InputError("IndexMapPair: n must be >= 1");
  IndexMapPair m;
  m.n = n;
  const std::size_t two_n = 2 * n;
  for (std::size_t j = 1; j <= two_n; ++j) {
    if (j % 2 == 1)
      m.f.push_back(2 * j);
    else if (j < two_n)
      m.f.push_back(2 * j + 1);
    else
      m.f.push_back(1);
    m.g.push_back(j % 2 == 1 ? 2 * j + 1 : 2 * j);
  }

  auto expect = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("index map table mismatch: ") + what);
  };
  auto F = [&](std::size_t j) { return m.f[j - 1]; };
  auto G = [&](std::size_t j) { return m.g[j - 1]; };
  // Leading columns: targets 1..4 (and 5..8 when n >= 2).
  expect(F(two_n) == 1 && F(1) == 2 && G(1) == 3 && G(2) == 4, "leading columns");
  if (n >= 2) expect(F(2) == 5 && F(3) == 6 && G(3) == 7 && G(4) == 8, "second group of columns");
  // Trailing columns: targets 4n-3..4n.
  if (n >= 2) expect(F(two_n - 2) == 4 * n - 3, "column 4n-3");
  expect(F(two_n - 1) == 4 * n - 2 && G(two_n - 1) == 4 * n - 1 && G(two_n) == 4 * n,
         "trailing columns");
  std::vector<int> hit(4 * n + 1, 0);
  for (auto v : m.f) ++hit[v];
  for (auto v : m.g) ++hit[v];
  for (std::size_t t = 1; t <= 4 * n; ++t) expect(hit[t] == 1, "ranges must partition 1..4n");
  return m;
}

Partition lift_p_of_r(const Partition& r, const IndexMapPair& maps) {
  const std::size_t two_n = 2 * maps.n;
  if (r.ground_size() != two_n)
    throw InputError("lift_p_of_r: r has " + std::to_string(r.ground_size()) +
                     " points, maps expect " + std::to_string(two_n));
  std::vector<int> labels(2 * two_n);
  const int blocks = static_cast<int>(r.block_count());
  for (std::size_t j = 1; j <= two_n; ++j) {
    labels[maps.f[j - 1] - 1] = r.block_of(j - 1);
    labels[maps.g[j - 1] - 1] = blocks + r.block_of(j - 1);
  }
  return Partition::from_labels(labels);
}

bool no_matched_pair(const Partition& r) {
  for (std::size_t j = 0; j + 1 < r.ground_size(); j += 2)
    if (r.same_block(j, j + 1)) return false;
  return true;
}

bool cyclic_adjacency_free(const Partition& r) {
  const std::size_t m = r.ground_size();
  for (std::size_t k = 1; k < m; ++k)
    if (r.same_block(k - 1, k)) return false;
  return !(m >= 2 && r.same_block(0, m - 1));
}

namespace {
std::size_t half_of(const Partition& r, const char* op) {
  if (r.ground_size() == 0 || r.ground_size() % 2 != 0)
    throw InputError(std::string(op) + ": partition must live on 2n points");
  return r.ground_size() / 2;
}
}  // namespace

bool check_lemma22(const Partition& r) {
  const auto n = half_of(r, "check_lemma22");
  if (!no_matched_pair(r))
    throw HypothesisViolation("check_lemma22: r joins some pair 2j-1, 2j");
  return 2 * join(r, eta(n)).block_count() <= r.block_count();
}

RsCheck check_rs_inequalities(const Partition& r) {
  const auto n = half_of(r, "check_rs_inequalities");
  RsCheck out;
  out.join_eta = join(r, eta(n)).block_count();
  out.join_eta_prime = join(r, eta_prime(n)).block_count();
  const auto sum = out.join_eta + out.join_eta_prime;
  out.rs1 = sum <= r.block_count() + 1;
  out.rnopair_holds = cyclic_adjacency_free(r);
  if (out.rnopair_holds) out.rs0 = sum <= r.block_count();
  return out;
}

LemmaScan scan_partition_lemmas(std::size_t two_n) {
  LemmaScan scan;
  scan.ground_size = two_n;
  PartitionEnumerator e(two_n);
  while (auto r = e.next()) {
    ++scan.partitions;
    const auto rs = check_rs_inequalities(*r);
    if (!rs.rs1) ++scan.rs1_failures;
    if (rs.rnopair_holds) {
      ++scan.rnopair_cases;
      if (!*rs.rs0) ++scan.rs0_failures;
    }
    if (no_matched_pair(*r)) {
      ++scan.lemma22_cases;
      if (!check_lemma22(*r)) ++scan.lemma22_failures;
    }
  }
  return scan;
}

}  // namespace soficperm
