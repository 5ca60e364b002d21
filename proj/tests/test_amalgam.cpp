#include "doctest.h"

#include <cmath>
#include <memory>

#include "soficperm/amalgam.hpp"
#include "soficperm/errors.hpp"
#include "soficperm/rng.hpp"

using namespace soficperm;

namespace {

std::vector<Element> all_of(const Group& G) { return *G.elements(); }

// Z/2 acting on itself, H trivial, T = {e}, amplified to |Z| = 2 * factor.
std::shared_ptr<const TileAlignedQA> dihedral_factor(std::size_t factor) {
  auto G = std::make_shared<CyclicGroup>(2);
  auto emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G));
  auto H = emb->subgroup_ptr();
  const auto tile = Tile::whole_group(H);
  const std::vector<Element> K{H->identity()};
  const auto F = all_of(*G);
  return std::make_shared<const TileAlignedQA>(amplify(align_to_tile(QuasiAction::regular(G), emb, tile, K, F), factor));
}

// Z/4 with H = {0, 2} = Z/2, T = K = H.
std::shared_ptr<const TileAlignedQA> z4_over_z2(std::size_t factor) {
  auto G = std::make_shared<CyclicGroup>(4);
  auto H = std::make_shared<CyclicGroup>(2);
  auto emb = std::make_shared<SubgroupEmbedding>(H, G, std::vector<Element>{{2}});
  const auto tile = Tile::whole_group(H);
  const auto K = all_of(*H);
  const auto F = all_of(*G);
  return std::make_shared<const TileAlignedQA>(amplify(align_to_tile(QuasiAction::regular(G), emb, tile, K, F), factor));
}

double mean_of(const std::vector<Rational>& v) {
  double s = 0;
  for (const auto& x : v) s += to_double(x);
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<Rational>& v) {
  const double m = mean_of(v);
  double ss = 0;
  for (const auto& x : v) ss += (to_double(x) - m) * (to_double(x) - m);
  return std::sqrt(ss / static_cast<double>(v.size()) / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("embeddings") {
  auto G = std::make_shared<CyclicGroup>(6);
  auto H = std::make_shared<CyclicGroup>(3);
  const SubgroupEmbedding emb(H, G, {{2}});
  CHECK(emb.image({2}) == Element{4});
  CHECK(emb.contains({4}));
  CHECK_FALSE(emb.contains({3}));
  CHECK(emb.preimage({4}) == Element{2});
  CHECK_THROWS_AS(SubgroupEmbedding(H, G, {{1}}), InputError);
  auto Z = std::make_shared<IntegerLattice>(1);
  CHECK_THROWS_AS(SubgroupEmbedding(Z, Z, {{2}}), UnsupportedGroup);
  CHECK(SubgroupEmbedding::identity(Z).contains({17}));
}

TEST_CASE("alignment of an exact action on the whole subgroup") {
  auto G = std::make_shared<CyclicGroup>(4);
  auto emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::identity(G));
  const auto F = all_of(*G);
  const auto aq = align_to_tile(QuasiAction::regular(G), emb, Tile::whole_group(G), F, F);
  CHECK(aq.aux_size == 1);
  CHECK(aq.report.measured.worst() == 0);
  CHECK(aq.report.uncovered == 0);
  CHECK(aq.report.tiling_penalty == 0);
}

TEST_CASE("alignment with a trivial subgroup changes nothing") {
  auto G = std::make_shared<CyclicGroup>(3);
  const auto qa = QuasiAction::regular(G).amplify(4);
  auto emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G));
  const std::vector<Element> K{emb->subgroup().identity()};
  const auto F = all_of(*G);
  const auto aq = align_to_tile(qa, emb, Tile::whole_group(emb->subgroup_ptr()), K, F);
  CHECK(aq.aux_size == qa.degree());
  for (const auto& g : F) CHECK(aq.action.at(g) == qa.at(g));
  CHECK(aq.report.measured.worst() == aq.report.source_defect);
}

TEST_CASE("alignment of a truncated shift on an interval tile") {
  auto Z = std::make_shared<IntegerLattice>(1);
  auto emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::identity(Z));
  for (std::size_t L : {4u, 8u, 16u}) {
    const auto qa = QuasiAction::truncated_shift(200, L + 2, QuasiAction::Wrap::reflect);
    const std::vector<Element> F{{-1}, {0}, {1}};
    const std::vector<Element> K{{-1}, {1}};
    const auto aq = align_to_tile(qa, emb, Tile::interval(L), K, F);
    CHECK(aq.report.tiling_penalty == make_rational(2, L));
    CHECK(aq.report.measured.worst() <= aq.report.budget);
    CHECK(aq.report.measured.worst() <= aq.report.source_defect + 6 * make_rational(2, L));
  }
}

TEST_CASE("block extraction is lossless") {
  const auto aq = z4_over_z2(3);
  for (const auto& [g, p] : aq->action.table()) {
    const auto blocks = extract_blocks(*aq, g);
    CHECK(blocks.reassemble() == p);
    CHECK(blocks.max_block_trace() <= 1);
  }
  for (const auto& h : aq->K) {
    const auto blocks = extract_blocks(*aq, aq->embedding->image(h));
    const auto rho = aq->tile_action(h);
    for (std::size_t t = 0; t < aq->tile_size(); ++t)
      for (std::size_t u = 0; u < aq->tile_size(); ++u)
        CHECK(blocks.block(t, u) == (rho[u] == t ? SubPermMatrix::identity(aq->aux_size) : SubPermMatrix(aq->aux_size)));
  }
  const auto single = dihedral_factor(2);
  const auto b = extract_blocks(*single, {1});
  CHECK(b.blocks.size() == 1);
  CHECK(b.reassemble() == single->action.at({1}));
  CHECK_THROWS_AS(extract_blocks(*single, {7}), DomainError);
}

TEST_CASE("conjugator commutes with the subgroup") {
  const auto a1 = z4_over_z2(5), a2 = z4_over_z2(5);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto amq = build_amalgam(a1, a2, seed);
    const auto& V = amq.conjugator();
    for (const auto& h : a1->K) {
      const Element g = a1->embedding->image(h);
      const auto psi = amq.syllable({1, g});
      CHECK(compose(V, psi) == compose(psi, V));
      CHECK(amq.syllable({2, g}) == psi);
    }
    for (const auto& g : all_of(a1->action.group())) {
      const Element gi = a1->action.group().inverse(g);
      CHECK(compose(amq.syllable({2, gi}), amq.syllable({2, g})).is_identity());
    }
  }
}

TEST_CASE("syllable products stay within the measured budget") {
  auto Z = std::make_shared<IntegerLattice>(1);
  auto emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(Z));
  const std::vector<Element> F{{-2}, {-1}, {0}, {1}, {2}};
  const auto qa = QuasiAction::truncated_shift(64, 4, QuasiAction::Wrap::cyclic);
  const std::vector<Element> K{emb->subgroup().identity()};
  auto aq = std::make_shared<const TileAlignedQA>(
      align_to_tile(qa, emb, Tile::whole_group(emb->subgroup_ptr()), K, F));
  const auto amq = build_amalgam(aq, aq, 11);
  for (const auto& g1 : F)
    for (const auto& g2 : F) {
      const Element g12{g1[0] + g2[0]};
      const auto lhs = compose(amq.syllable({1, g1}), amq.syllable({1, g2}));
      CHECK(normalized_hamming(lhs, amq.syllable({1, g12})) <= 2 * aq->report.budget);
    }
}

TEST_CASE("misaligned factors are rejected") {
  const auto a = dihedral_factor(4), b = dihedral_factor(5);
  CHECK_THROWS_AS(build_amalgam(a, b, 1), AlignmentError);
  const AlternatingWord w{{{1}, {1}}};
  CHECK_THROWS_AS(certify_vanishing(*a, *b, w, 10, 1), AlignmentError);
  const AlternatingWord inside{{{0}, {1}}};
  CHECK_THROWS_AS(certify_vanishing(*a, *a, inside, 10, 1), InputError);
  auto G = std::make_shared<CyclicGroup>(2);
  auto other = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(std::make_shared<CyclicGroup>(3)));
  CHECK_THROWS_AS(align_to_tile(QuasiAction::regular(G), other, Tile::whole_group(other->subgroup_ptr()),
                                std::vector<Element>{}, all_of(*G)),
                  AlignmentError);
}

TEST_CASE("amalgam word algebra") {
  auto G = std::make_shared<CyclicGroup>(2);
  auto e1 = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G));
  auto e2 = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G));
  const Amalgam am(e1, e2);
  CHECK(am.reduce(am.parse("1:[1] 1:[1]")).empty());
  CHECK(am.reduce(am.parse("1:[1] 2:[0] 1:[1] 2:[1]")) == am.parse("2:[1]"));
  const auto ab = am.parse("1:[1] 2:[1]");
  CHECK(am.classify(ab) == WordCase::c);
  CHECK(am.classify(am.parse("1:[1]")) == WordCase::a);
  CHECK(am.classify(am.parse("2:[1]")) == WordCase::b);
  const auto aba = am.parse("1:[1] 2:[1] 1:[1]");
  CHECK(am.classify(aba) == WordCase::d);
  const auto route = am.conjugate_to_core(aba);
  CHECK(am.classify(route.core) != WordCase::d);
  CHECK(am.format(ab) == "1:[1] 2:[1]");
  CHECK(am.reduce(am.inverse(ab)) == am.parse("2:[1] 1:[1]"));
  CHECK(am.reduced_words_up_to(4).size() == 8);
  CHECK_THROWS_AS(am.classify({}), InputError);
}

TEST_CASE("bi-invariance along the conjugation route") {
  const auto f = dihedral_factor(16);
  auto G = std::make_shared<CyclicGroup>(2);
  const Amalgam am(std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G)),
                   std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G)));
  std::vector<AmalgamQA> per_seed;
  for (std::uint64_t s = 0; s < 5; ++s) per_seed.push_back(build_amalgam(f, f, derive_seed(3, {s})));
  for (const auto& w : am.reduced_words_up_to(5)) {
    const auto wd = check_word_distance(am, per_seed, w);
    CHECK(wd.dist == wd.direct_dist);
    if (wd.word_case == WordCase::a || wd.word_case == WordCase::b) CHECK(wd.mean_dist == 1.0);
  }
}

TEST_CASE("exact block route equals the derandomized trace") {
  for (std::size_t factor : {1u, 2u, 3u}) {
    const auto f = dihedral_factor(factor);
    for (std::size_t n : {1u, 2u}) {
      AlternatingWord w;
      for (std::size_t k = 0; k < 2 * n; ++k) w.elements.push_back({1});
      const auto rep = certify_vanishing(*f, *f, w, 2000, 5, 2, true);
      const auto der = derandomized_trace(*f, *f, w);
      REQUIRE(rep.exact.has_value());
      CHECK(*rep.exact == der);
      CHECK(std::abs(rep.estimate.mean - to_double(der)) <= 4 * rep.estimate.std_error + 1e-12);
      CHECK(rep.within_ceiling());
    }
  }
  CHECK_THROWS_AS(derandomized_trace(*dihedral_factor(4), *dihedral_factor(4), AlternatingWord{{{1}, {1}}}),
                  BudgetExceeded);
}

TEST_CASE("case (c) distances approach one") {
  auto G = std::make_shared<CyclicGroup>(2);
  const Amalgam am(std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G)),
                   std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::trivial(G)));
  const auto w = am.parse("1:[1] 2:[1]");
  double prev_mean = -1, prev_se = 0;
  for (std::size_t Z : {64u, 256u, 1024u}) {
    const auto f = dihedral_factor(Z / 2);
    std::vector<AmalgamQA> per_seed;
    for (std::uint64_t s = 0; s < 20; ++s) per_seed.push_back(build_amalgam(f, f, derive_seed(Z, {s})));
    const auto wd = check_word_distance(am, per_seed, w);
    CHECK(wd.word_case == WordCase::c);
    const double m = mean_of(wd.dist), se = stderr_of(wd.dist);
    if (prev_mean >= 0) CHECK(m >= prev_mean - 2 * std::sqrt(se * se + prev_se * prev_se));
    prev_mean = m;
    prev_se = se;
  }
  CHECK(prev_mean >= 0.99);
}
