#include "doctest.h"
#include "support.hpp"

#include <algorithm>

#include "soficperm/errors.hpp"
#include "soficperm/moment.hpp"
#include "soficperm/partition.hpp"

using namespace soficperm;
using testsupport::random_partition;
using testsupport::random_spec;

namespace {

// Average of the dense word trace over every sigma in S_d.
Rational dense_average(const MomentSpec& s) {
  std::vector<std::uint32_t> img(s.degree);
  std::iota(img.begin(), img.end(), 0u);
  Integer total = 0, count = 0;
  do {
    total += testsupport::dense_word_trace(s, Permutation(img));
    count += 1;
  } while (std::next_permutation(img.begin(), img.end()));
  return ratio(total, count * static_cast<unsigned long>(s.degree));
}

MomentSpec shift_spec(std::size_t d, std::size_t n) {
  MomentSpec s{d, {}};
  for (std::size_t j = 0; j < 2 * n; ++j)
    s.matrices.push_back(SubPermMatrix::from_permutation(Permutation::shift(d, static_cast<std::int64_t>(j) + 1)));
  return s;
}

}  // namespace

TEST_CASE("weingarten weights") {
  for (std::size_t d = 1; d <= 9; ++d) {
    CHECK(weingarten_weight(1, d) == make_rational(1, d));
    std::uint64_t fact = 1;
    for (std::size_t k = 2; k <= d; ++k) fact *= k;
    CHECK(weingarten_weight(d, d) == make_rational(1, fact));
    CHECK(weingarten_weight(d + 1, d) == 0);
  }
  CHECK(weingarten_weight(2, 4) == make_rational(1, 12));
}

TEST_CASE("word trace count matches dense products") {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 60; ++rep) {
    const auto s = random_spec(3 + rep % 5, 1 + rep % 3, rng);
    const auto sigma = testsupport::random_perm(s.degree, rng);
    const auto inv = sigma.inverse();
    CHECK(static_cast<long>(word_trace_count(s, sigma.image(), inv.image())) ==
          testsupport::dense_word_trace(s, sigma));
  }
}

TEST_CASE("exact moment examples") {
  for (std::size_t d = 2; d <= 6; ++d) {
    MomentSpec id{d, {SubPermMatrix::identity(d), SubPermMatrix::identity(d)}};
    CHECK(exact_moment(id) == 1);
    MomentSpec cyc{d, {SubPermMatrix::identity(d), SubPermMatrix::from_permutation(Permutation::shift(d, 1))}};
    CHECK(exact_moment(cyc) == 0);
    CHECK(brute_force_moment(cyc) == 0);
  }
  const auto swap = SubPermMatrix::from_permutation(Permutation({1, 0}));
  MomentSpec sw{2, {swap, swap}};
  CHECK(exact_moment(sw) == dense_average(sw));
  CHECK(exact_moment(sw) == 1);
}

TEST_CASE("exact moment equals both brute-force oracles") {
  std::mt19937_64 rng(22);
  for (std::size_t d = 3; d <= 5; ++d)
    for (std::size_t n = 1; n <= 2; ++n)
      for (int rep = 0; rep < 4; ++rep) {
        const auto s = random_spec(d, n, rng);
        const auto e = exact_moment(s);
        CHECK(e == brute_force_moment(s));
        CHECK(e == dense_average(s));
      }
}

TEST_CASE("exact moment honours the budget") {
  std::mt19937_64 rng(23);
  const auto s = random_spec(6, 2, rng);
  EngineConfig tight;
  tight.budget = 1000;
  CHECK_THROWS_AS(exact_moment(s, tight), BudgetExceeded);
  EngineConfig par;
  par.workers = 3;
  CHECK(exact_moment(s, par) == exact_moment(s));
}

TEST_CASE("monte carlo") {
  MomentSpec id{7, {SubPermMatrix::identity(7), SubPermMatrix::identity(7)}};
  const auto one = mc_moment(id, 200, 5);
  CHECK(one.mean == 1.0);
  CHECK(one.std_error == 0.0);

  std::mt19937_64 rng(24);
  for (int rep = 0; rep < 6; ++rep) {
    const auto s = random_spec(5, 1 + rep % 2, rng);
    const auto a = mc_moment(s, 3000, 99 + rep, 1);
    const auto b = mc_moment(s, 3000, 99 + rep, 4);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    const double exact = to_double(exact_moment(s));
    CHECK(std::abs(a.mean - exact) <= 4 * a.std_error + 1e-12);
  }
  const MomentSpec empty{3, {}};
  CHECK_THROWS_AS(empty.validate(), InputError);
}

TEST_CASE("s_sum examples") {
  for (std::size_t d = 2; d <= 6; ++d)
    for (std::size_t m = 1; m <= 3; ++m) {
      std::vector<SubPermMatrix> ids(m, SubPermMatrix::identity(d));
      CHECK(s_sum(eta(m), ids, d) == ipow(d, static_cast<unsigned>(m)));
    }
}

TEST_CASE("s_sum matches the naive oracle and the pair bounds") {
  std::mt19937_64 rng(25);
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t m = 1 + rep % 3;
    const std::size_t d = m == 3 ? 2 + rep % 5 : 2 + rep % 9;
    const auto p = random_partition(2 * m, rng);
    std::vector<SubPermMatrix> mats;
    std::uniform_real_distribution<double> keep(0.2, 1.0);
    for (std::size_t j = 0; j < m; ++j) mats.push_back(testsupport::random_subperm(d, rng, keep(rng)));
    const Integer s = s_sum(p, mats, d);
    CHECK(s == testsupport::naive_s_sum(p, mats, d));
    const unsigned joined = static_cast<unsigned>(join(p, eta(m)).block_count());
    CHECK(s <= ipow(d, joined));
    bool matched = false;
    for (std::size_t j = 0; j < m; ++j) matched = matched || p.same_block(2 * j, 2 * j + 1);
    if (matched) CHECK(Rational(s) <= max_normalized_trace(mats) * Rational(ipow(d, joined)));
  }
}

TEST_CASE("trace-zero pair kills the sum") {
  const std::size_t d = 7;
  std::vector<SubPermMatrix> mats{SubPermMatrix::from_permutation(Permutation::shift(d, 2)),
                                  SubPermMatrix::identity(d)};
  const auto p = Partition::from_labels(std::vector<int>{0, 0, 1, 2});
  CHECK(s_sum(p, mats, d) == 0);
}

TEST_CASE("bound constant") {
  CHECK(bound_constant(1) == 4 * 2);
  CHECK(bound_constant(2) == 16 * 15);
}

TEST_CASE("bound ordering on random specs") {
  std::mt19937_64 rng(26);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t n = 1 + rep % 2;
    const std::size_t d = 4 * n + rep % 3;
    const auto s = random_spec(d, n, rng);
    const auto rep_bound = paper_bound(s);
    CHECK(rep_bound.exact.has_value());
    CHECK(rep_bound.ordered());
    CHECK(*rep_bound.exact <= rep_bound.paper_bound);
    CHECK(rep_bound.paper_bound <= rep_bound.cn_dn_bound);
    CHECK(rep_bound.cn == bound_constant(n));
  }
  std::mt19937_64 small(27);
  CHECK_THROWS_AS(paper_bound(random_spec(3, 1, small)), InputError);
}

TEST_CASE("trace-zero specs decay") {
  for (std::size_t n = 1; n <= 2; ++n) {
    Rational prev = -1, prev_closed = -1;
    for (std::size_t d : {8u, 16u, 32u}) {
      const auto r = paper_bound(shift_spec(d, n), {}, false);
      CHECK(r.f_of_d == 0);
      CHECK(r.paper_bound < Rational(10 * r.cn) / static_cast<unsigned long>(d));
      if (prev >= 0) {
        CHECK(r.paper_bound <= prev);
        CHECK(r.cn_dn_bound <= prev_closed);
      }
      prev = r.paper_bound;
      prev_closed = r.cn_dn_bound;
    }
  }
}
