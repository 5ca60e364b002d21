#include "soficperm/moment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "soficperm/errors.hpp"
#include "soficperm/parallel.hpp"
#include "soficperm/rng.hpp"

namespace soficperm {

void MomentSpec::validate() const {
  if (matrices.empty() || matrices.size() % 2 != 0)
    throw InputError("moment spec needs an even, nonzero number of matrices (got " +
                     std::to_string(matrices.size()) + ")");
  if (degree == 0) throw InputError("moment spec degree must be positive");
  for (const auto& m : matrices)
    if (m.degree() != degree)
      throw InputError("moment spec matrix of degree " + std::to_string(m.degree()) +
                       " in a spec of degree " + std::to_string(degree));
}

Rational weingarten_weight(std::size_t blocks, std::size_t d) {
  if (blocks > d) return Rational{0};
  Integer falling{1};
  for (std::size_t k = 0; k < blocks; ++k) falling *= static_cast<unsigned long>(d - k);
  return ratio(Integer{1}, falling);
}

namespace {

bool power_within(std::uint64_t base, std::size_t exp, std::uint64_t budget) {
  unsigned __int128 acc = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    acc *= base;
    if (acc > budget) return false;
  }
  return true;
}

// Count of contributing index tuples, bucketed by |r|.
using BlockCounts = std::vector<std::uint64_t>;

BlockCounts count_matching_tuples(const MomentSpec& spec, std::size_t first_entry_lo,
                                  std::size_t first_entry_hi) {
  const std::size_t two_n = spec.matrices.size();
  const auto maps = IndexMapPair::build(spec.half_length());
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> entries;
  entries.reserve(two_n);
  for (const auto& m : spec.matrices) entries.push_back(m.entries());

  BlockCounts counts(two_n + 1, 0);
  for (const auto& e : entries)
    if (e.empty()) return counts;

  // i[0..4n-1]: matrix j (0-based) fixes i[2j] = row, i[2j+1] = col.
  std::vector<std::uint32_t> idx(2 * two_n);
  std::vector<std::size_t> choice(two_n, 0);
  choice[0] = first_entry_lo;
  if (first_entry_lo >= first_entry_hi) return counts;

  std::vector<std::uint32_t> row(two_n), col(two_n);
  while (true) {
    for (std::size_t j = 0; j < two_n; ++j) {
      idx[2 * j] = entries[j][choice[j]].first;
      idx[2 * j + 1] = entries[j][choice[j]].second;
    }
    for (std::size_t j = 0; j < two_n; ++j) {
      row[j] = idx[maps.f[j] - 1];
      col[j] = idx[maps.g[j] - 1];
    }
    bool same = true;
    std::size_t blocks = 0;
    for (std::size_t a = 0; a < two_n && same; ++a) {
      bool fresh = true;
      for (std::size_t b = 0; b < a; ++b) {
        const bool rr = row[a] == row[b];
        if (rr != (col[a] == col[b])) {
          same = false;
          break;
        }
        if (rr) fresh = false;
      }
      blocks += fresh;
    }
    if (same) ++counts[blocks];

    std::size_t j = two_n;
    while (j-- > 0) {
      if (++choice[j] < (j == 0 ? first_entry_hi : entries[j].size())) break;
      if (j == 0) return counts;
      choice[j] = 0;
    }
  }
}

}  // namespace

Rational exact_moment(const MomentSpec& spec, const EngineConfig& cfg) {
  spec.validate();
  const std::size_t d = spec.degree;
  const std::size_t two_n = spec.matrices.size();
  if (!power_within(d, 2 * two_n, cfg.budget))
    throw BudgetExceeded("exact_moment: d^{4n} = " + std::to_string(d) + "^" +
                         std::to_string(2 * two_n) + " exceeds budget " + std::to_string(cfg.budget));

  const std::size_t first = spec.matrices[0].nonzeros();
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(std::max<std::size_t>(first, 1))));
  auto partials = parallel_map<BlockCounts>(workers, workers, [&](std::size_t w) {
    const std::size_t lo = first * w / workers, hi = first * (w + 1) / workers;
    return count_matching_tuples(spec, lo, hi);
  });

  Rational total{0};
  for (std::size_t k = 0; k <= two_n; ++k) {
    std::uint64_t c = 0;
    for (const auto& p : partials) c += p[k];
    if (c) total += Rational{make_integer(c)} * weingarten_weight(k, d);
  }
  total /= Rational{make_integer(d)};
  return total;
}

std::size_t word_trace_count(const MomentSpec& spec, std::span<const std::uint32_t> sigma,
                             std::span<const std::uint32_t> sigma_inv) {
  // U = matrix(sigma) has row -> col map sigma^{-1}; U* has sigma.
  const std::size_t d = spec.degree;
  std::size_t fixed = 0;
  for (std::size_t start = 0; start < d; ++start) {
    std::int32_t x = static_cast<std::int32_t>(start);
    for (std::size_t j = 0; j < spec.matrices.size() && x >= 0; ++j) {
      x = spec.matrices[j].col_of_row(static_cast<std::size_t>(x));
      if (x < 0) break;
      x = static_cast<std::int32_t>(j % 2 == 0 ? sigma_inv[x] : sigma[x]);
    }
    fixed += x == static_cast<std::int32_t>(start);
  }
  return fixed;
}

Rational brute_force_moment(const MomentSpec& spec) {
  spec.validate();
  const std::size_t d = spec.degree;
  if (d > kBruteForceMaxDegree)
    throw BudgetExceeded("brute_force_moment: d = " + std::to_string(d) + " > " +
                         std::to_string(kBruteForceMaxDegree));
  std::vector<std::uint32_t> sigma(d), inv(d);
  std::iota(sigma.begin(), sigma.end(), 0u);
  std::uint64_t total = 0, count = 0;
  do {
    for (std::size_t k = 0; k < d; ++k) inv[sigma[k]] = static_cast<std::uint32_t>(k);
    total += word_trace_count(spec, sigma, inv);
    ++count;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return make_rational(total, count * d);
}

McEstimate summarize_samples(std::span<const double> values) {
  McEstimate e;
  e.samples = values.size();
  if (values.empty()) return e;
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    e.mean = values.front();
    return e;
  }
  double sum = 0;
  for (double v : values) sum += v;
  e.mean = sum / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  e.std_error = std::sqrt(ss / static_cast<double>(values.size()) / static_cast<double>(values.size()));
  return e;
}

McEstimate mc_moment(const MomentSpec& spec, std::size_t samples, std::uint64_t seed,
                     unsigned workers) {
  spec.validate();
  if (samples == 0) throw InputError("mc_moment: samples must be >= 1");
  const std::size_t d = spec.degree;
  auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
    CounterRng rng(derive_seed(seed, {i}));
    std::vector<std::uint32_t> sigma(d), inv(d);
    random_permutation_into(sigma, rng);
    for (std::size_t k = 0; k < d; ++k) inv[sigma[k]] = static_cast<std::uint32_t>(k);
    return static_cast<double>(word_trace_count(spec, sigma, inv)) / static_cast<double>(d);
  });
  auto e = summarize_samples(values);
  e.seed = seed;
  return e;
}

Integer s_sum(const Partition& p, std::span<const SubPermMatrix> matrices, std::size_t d) {
  const std::size_t m = matrices.size();
  if (m == 0 || p.ground_size() != 2 * m)
    throw InputError("s_sum: partition on " + std::to_string(p.ground_size()) + " points needs " +
                     std::to_string(p.ground_size() / 2) + " matrices, got " + std::to_string(m));
  for (const auto& b : matrices)
    if (b.degree() != d) throw InputError("s_sum: matrix degree differs from d");

  const Partition connected = join(p, eta(m));
  const auto p_blocks = p.blocks();
  Integer total{1};
  std::vector<std::int64_t> value(2 * m, -1);
  std::vector<std::size_t> stack;

  for (const auto& block : connected.blocks()) {
    std::uint64_t count = 0;
    for (std::size_t v = 0; v < d; ++v) {
      for (auto pos : block) value[pos] = -1;
      stack.assign(1, block.front());
      value[block.front()] = static_cast<std::int64_t>(v);
      bool ok = true;
      auto assign = [&](std::size_t pos, std::int64_t val) {
        if (value[pos] == -1) {
          value[pos] = val;
          stack.push_back(pos);
        } else if (value[pos] != val) {
          ok = false;
        }
      };
      while (ok && !stack.empty()) {
        const std::size_t pos = stack.back();
        stack.pop_back();
        const std::int64_t val = value[pos];
        for (auto mate : p_blocks[p.block_of(pos)]) assign(mate, val);
        const auto& b = matrices[pos / 2];
        const std::int32_t partner = pos % 2 == 0 ? b.col_of_row(static_cast<std::size_t>(val))
                                                  : b.row_of_col(static_cast<std::size_t>(val));
        if (partner == SubPermMatrix::kEmpty) {
          ok = false;
          break;
        }
        assign(pos % 2 == 0 ? pos + 1 : pos - 1, partner);
      }
      count += ok;
    }
    if (count == 0) return Integer{0};
    total *= make_integer(count);
  }
  return total;
}

Rational max_normalized_trace(std::span<const SubPermMatrix> matrices) {
  Rational best{0};
  for (const auto& b : matrices) best = std::max(best, normalized_trace(b));
  return best;
}

Integer bound_constant(std::size_t n) {
  return ipow(2, static_cast<unsigned>(2 * n)) * make_integer(bell_number(2 * n));
}

bool BoundReport::ordered() const {
  if (exact && *exact > paper_bound) return false;
  return paper_bound <= cn_dn_bound;
}

BoundReport paper_bound(const MomentSpec& spec, const EngineConfig& cfg, bool with_exact) {
  spec.validate();
  const std::size_t d = spec.degree;
  const std::size_t n = spec.half_length();
  if (d < 4 * n)
    throw InputError("paper_bound: requires d >= 4n (d = " + std::to_string(d) +
                     ", n = " + std::to_string(n) + ")");
  if (2 * n > 8) throw BudgetExceeded("paper_bound: 2n > 8 exceeds the partition budget");

  BoundReport rep;
  rep.d = d;
  rep.n = n;
  rep.f_of_d = max_normalized_trace(spec.matrices);
  rep.cn = bound_constant(n);
  rep.cn_dn_bound = Rational{rep.cn} * rep.f_of_d + ratio(rep.cn, make_integer(d));

  const auto maps = IndexMapPair::build(n);
  const auto rs = all_partitions(2 * n);
  auto terms = parallel_map<Rational>(rs.size(), cfg.workers, [&](std::size_t k) {
    const auto p = lift_p_of_r(rs[k], maps);
    const Integer s = s_sum(p, spec.matrices, d);
    return ratio(s, ipow(d, static_cast<unsigned>(rs[k].block_count() + 1)));
  });
  Rational sum{0};
  for (const auto& t : terms) sum += t;
  rep.paper_bound = sum * Rational{ipow(2, static_cast<unsigned>(2 * n))};

  if (with_exact && power_within(d, 4 * n, cfg.budget)) rep.exact = exact_moment(spec, cfg);
  return rep;
}

}  // namespace soficperm
