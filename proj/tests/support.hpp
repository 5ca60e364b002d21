#pragma once

// Shared generators and brute-force oracles for the test binaries. Oracles
// here use dense matrices and plain loops, never the library's fast paths.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "soficperm/moment.hpp"
#include "soficperm/partition.hpp"
#include "soficperm/perm.hpp"

namespace testsupport {

using Dense = std::vector<std::vector<int>>;

inline soficperm::Permutation random_perm(std::size_t d, std::mt19937_64& rng) {
  std::vector<std::uint32_t> img(d);
  std::iota(img.begin(), img.end(), 0u);
  std::shuffle(img.begin(), img.end(), rng);
  return soficperm::Permutation(std::move(img));
}

/// A random partial injection: a random permutation with each entry kept
/// with probability `keep`.
inline soficperm::SubPermMatrix random_subperm(std::size_t d, std::mt19937_64& rng, double keep = 0.7) {
  const auto p = random_perm(d, rng);
  std::bernoulli_distribution coin(keep);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  for (std::uint32_t k = 0; k < d; ++k)
    if (coin(rng)) entries.emplace_back(p[k], k);
  return soficperm::SubPermMatrix::from_entries(d, entries);
}

inline soficperm::MomentSpec random_spec(std::size_t d, std::size_t n, std::mt19937_64& rng) {
  soficperm::MomentSpec s{d, {}};
  std::uniform_real_distribution<double> keep(0.3, 1.0);
  for (std::size_t j = 0; j < 2 * n; ++j) s.matrices.push_back(random_subperm(d, rng, keep(rng)));
  return s;
}

inline Dense dense(const soficperm::SubPermMatrix& m) {
  Dense out(m.degree(), std::vector<int>(m.degree(), 0));
  for (auto [r, c] : m.entries()) out[r][c] = 1;
  return out;
}

inline Dense dense(const soficperm::Permutation& p) {
  Dense out(p.degree(), std::vector<int>(p.degree(), 0));
  for (std::size_t k = 0; k < p.degree(); ++k) out[p[k]][k] = 1;
  return out;
}

inline Dense dense_mul(const Dense& a, const Dense& b) {
  const std::size_t d = a.size();
  Dense c(d, std::vector<int>(d, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < d; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Dense dense_transpose(const Dense& a) {
  Dense t(a.size(), std::vector<int>(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline long dense_trace(const Dense& a) {
  long t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

/// Tr(B_1 (U B_2 U^T) B_3 ...) with dense products.
inline long dense_word_trace(const soficperm::MomentSpec& s, const soficperm::Permutation& sigma) {
  const Dense U = dense(sigma), Ut = dense_transpose(U);
  Dense acc = dense(soficperm::SubPermMatrix::identity(s.degree));
  for (std::size_t j = 0; j < s.matrices.size(); ++j) {
    const Dense B = dense(s.matrices[j]);
    acc = j % 2 == 0 ? dense_mul(acc, B) : dense_mul(dense_mul(dense_mul(acc, U), B), Ut);
  }
  return dense_trace(acc);
}

/// Number of i in [d]^{2m} constant on the blocks of p with every b^{(j)}_{i_{2j-1} i_{2j}} = 1.
inline std::uint64_t naive_s_sum(const soficperm::Partition& p, const std::vector<soficperm::SubPermMatrix>& mats,
                                 std::size_t d) {
  const std::size_t len = p.ground_size();
  std::vector<std::size_t> i(len, 0);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (std::size_t a = 0; a < len && ok; ++a)
      for (std::size_t b = a + 1; b < len && ok; ++b)
        if (p.same_block(a, b) && i[a] != i[b]) ok = false;
    for (std::size_t j = 0; j < mats.size() && ok; ++j) ok = mats[j].at(i[2 * j], i[2 * j + 1]);
    count += ok;
    std::size_t k = 0;
    while (k < len && i[k] == d - 1) i[k++] = 0;
    if (k == len) break;
    ++i[k];
  }
  return count;
}

/// A random partition of m points: uniform random labels in [0, m).
inline soficperm::Partition random_partition(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> label(0, static_cast<int>(m) - 1);
  std::vector<int> labels(m);
  for (auto& l : labels) l = label(rng);
  return soficperm::Partition::from_labels(labels);
}

}  // namespace testsupport
