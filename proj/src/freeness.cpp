#include "soficperm/freeness.hpp"

#include <algorithm>
#include <cmath>

#include "soficperm/errors.hpp"
#include "soficperm/parallel.hpp"
#include "soficperm/quasi_action.hpp"
#include "soficperm/rng.hpp"

namespace soficperm {
namespace {

Element idx(std::int64_t j) { return Element{j}; }

ProductRule exact_rule(FamilyIndex j) { return {ProductRule::Kind::exact, std::move(j)}; }
ProductRule near_identity_rule() { return {ProductRule::Kind::near_identity, {}}; }

// x -> F_0[F_1[...F_{k-1}[x]]], counted at fixed points.
std::size_t product_fixed_points(std::span<const Permutation* const> factors, std::size_t d) {
  std::size_t fixed = 0;
  for (std::size_t k = 0; k < d; ++k) {
    std::uint32_t x = static_cast<std::uint32_t>(k);
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = (**it)[x];
    fixed += x == k;
  }
  return fixed;
}

std::vector<Permutation> draw_generators(std::size_t count, std::size_t d, CounterRng& rng) {
  std::vector<Permutation> out;
  out.reserve(std::max<std::size_t>(count, 1));
  for (std::size_t g = 0; g < std::max<std::size_t>(count, 1); ++g) out.push_back(random_permutation(d, rng));
  return out;
}

std::vector<Permutation> inverses_of(const std::vector<Permutation>& ps) {
  std::vector<Permutation> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(p.inverse());
  return out;
}

}  // namespace

DeterministicFamily::DeterministicFamily(std::string name, std::vector<FamilyIndex> indices, Builder builder,
                                         Rule rule, Membership member)
    : name_(std::move(name)),
      indices_(std::move(indices)),
      builder_(std::move(builder)),
      rule_(std::move(rule)),
      member_(std::move(member)) {
  if (indices_.empty()) throw InputError("family '" + name_ + "' has no indices");
}

bool DeterministicFamily::contains(const FamilyIndex& j) const {
  if (member_) return member_(j);
  return std::find(indices_.begin(), indices_.end(), j) != indices_.end();
}

Permutation DeterministicFamily::matrix(const FamilyIndex& j, std::size_t d) const {
  if (!contains(j)) throw DomainError("index " + format_element(j) + " is not in family '" + name_ + "'");
  if (d == 0) throw InputError("degree must be positive");
  return builder_(j, d);
}

ProductRule DeterministicFamily::product(const FamilyIndex& j1, const FamilyIndex& j2) const {
  if (!contains(j1) || !contains(j2))
    throw DomainError("product of indices outside family '" + name_ + "'");
  return rule_(j1, j2);
}

DeterministicFamily DeterministicFamily::cycle_powers(std::vector<std::int64_t> powers) {
  std::vector<FamilyIndex> js;
  for (auto p : powers) {
    if (p == 0) throw InputError("cycle powers are indexed by nonzero integers");
    js.push_back(idx(p));
  }
  return DeterministicFamily(
      "cycle_powers", std::move(js),
      [](const FamilyIndex& j, std::size_t d) { return Permutation::shift(d, j[0]); },
      [](const FamilyIndex& a, const FamilyIndex& b) {
        const auto s = a[0] + b[0];
        return s == 0 ? near_identity_rule() : exact_rule(idx(s));
      },
      [](const FamilyIndex& j) { return j.size() == 1 && j[0] != 0; });
}

DeterministicFamily DeterministicFamily::half_shift() {
  return DeterministicFamily(
      "half_shift", {idx(1)},
      [](const FamilyIndex&, std::size_t d) {
        if (d % 2 != 0) throw DomainError("half_shift needs an even degree");
        return Permutation::shift(d, static_cast<std::int64_t>(d / 2));
      },
      [](const FamilyIndex&, const FamilyIndex&) { return near_identity_rule(); });
}

DeterministicFamily DeterministicFamily::integer_shifts(std::vector<std::int64_t> shifts) {
  std::vector<FamilyIndex> js;
  for (auto s : shifts) {
    if (s == 0) throw InputError("integer shifts are indexed by nonzero integers");
    js.push_back(idx(s));
  }
  return DeterministicFamily(
      "integer_shifts", std::move(js),
      [](const FamilyIndex& j, std::size_t d) {
        const auto r = static_cast<std::size_t>(std::llabs(j[0]));
        return QuasiAction::truncated_shift(d, r, QuasiAction::Wrap::reflect).at(j);
      },
      [](const FamilyIndex& a, const FamilyIndex& b) {
        return a[0] + b[0] == 0 ? near_identity_rule() : ProductRule{};
      },
      [](const FamilyIndex& j) { return j.size() == 1 && j[0] != 0; });
}

DeterministicFamily DeterministicFamily::free_group_images(std::uint64_t seed, std::size_t radius) {
  auto F2 = std::make_shared<FreeGroup>(2);
  std::vector<FamilyIndex> js;
  for (auto& w : F2->ball(radius))
    if (!w.empty()) js.push_back(std::move(w));
  return DeterministicFamily(
      "free_group_images", std::move(js),
      [seed](const FamilyIndex& w, std::size_t d) {
        std::vector<Permutation> gens;
        for (std::uint64_t g = 0; g < 2; ++g) {
          CounterRng rng(derive_seed(seed, {d, g}));
          gens.push_back(random_permutation(d, rng));
        }
        const std::vector<Permutation> inv = inverses_of(gens);
        Permutation out = Permutation::identity(d);
        for (auto letter : w) {
          const auto g = static_cast<std::size_t>(std::llabs(letter) - 1);
          out = compose(out, letter > 0 ? gens[g] : inv[g]);
        }
        return out;
      },
      [F2](const FamilyIndex& a, const FamilyIndex& b) {
        auto ab = F2->multiply(a, b);
        return ab.empty() ? near_identity_rule() : exact_rule(std::move(ab));
      },
      [F2](const FamilyIndex& w) {
        if (w.empty()) return false;
        try {
          F2->validate(w);
          return true;
        } catch (const Error&) {
          return false;
        }
      });
}

DeterministicFamily DeterministicFamily::transpositions(std::size_t count) {
  if (count == 0) throw InputError("transpositions: count must be positive");
  std::vector<FamilyIndex> js;
  for (std::size_t j = 0; j < count; ++j) js.push_back(idx(static_cast<std::int64_t>(j)));
  return DeterministicFamily(
      "transpositions", std::move(js),
      [](const FamilyIndex& j, std::size_t d) {
        const auto a = static_cast<std::size_t>(2 * j[0]);
        if (a + 1 >= d) throw DomainError("transposition index too large for the degree");
        std::vector<std::uint32_t> img(d);
        for (std::size_t k = 0; k < d; ++k) img[k] = static_cast<std::uint32_t>(k);
        std::swap(img[a], img[a + 1]);
        return from_trusted_image(std::move(img));
      },
      // Two commuting transpositions move at most 4 points.
      [](const FamilyIndex&, const FamilyIndex&) { return near_identity_rule(); });
}

DeterministicFamily DeterministicFamily::from_table(std::map<std::int64_t, std::map<std::size_t, Permutation>> table) {
  if (table.empty()) throw InputError("family table is empty");
  std::vector<FamilyIndex> js;
  for (const auto& [j, by_degree] : table) {
    if (by_degree.empty()) throw InputError("family table entry " + std::to_string(j) + " has no degrees");
    for (const auto& [d, p] : by_degree)
      if (p.degree() != d) throw InputError("family table entry " + std::to_string(j) + " has a degree mismatch");
    js.push_back(idx(j));
  }
  auto shared = std::make_shared<const decltype(table)>(std::move(table));
  auto lookup = [shared](const FamilyIndex& j, std::size_t d) -> Permutation {
    const auto& by_degree = shared->at(j[0]);
    auto it = by_degree.find(d);
    if (it == by_degree.end())
      throw DomainError("family table has no degree " + std::to_string(d) + " for index " + std::to_string(j[0]));
    return it->second;
  };
  auto rule = [shared, lookup](const FamilyIndex& a, const FamilyIndex& b) {
    std::vector<std::size_t> degrees;
    for (const auto& [d, p] : shared->at(a[0]))
      if (shared->at(b[0]).contains(d)) degrees.push_back(d);
    if (degrees.empty()) return ProductRule{};
    std::vector<Permutation> products;
    std::vector<Rational> dists;
    for (auto d : degrees) {
      products.push_back(compose(lookup(a, d), lookup(b, d)));
      dists.push_back(normalized_hamming(products.back(), Permutation::identity(d)));
    }
    for (const auto& [c, by_degree] : *shared) {
      bool all = true;
      for (std::size_t k = 0; k < degrees.size() && all; ++k) {
        auto it = by_degree.find(degrees[k]);
        all = it != by_degree.end() && it->second == products[k];
      }
      if (all) return exact_rule(idx(c));
    }
    return trends_to_zero(dists) ? near_identity_rule() : ProductRule{};
  };
  return DeterministicFamily("table", std::move(js), lookup, rule);
}

bool trends_to_zero(std::span<const Rational> values) {
  if (values.empty()) return false;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[k - 1]) return false;
  return values.back() == 0 || values.back() < values.front();
}

FamilyReport verify_family(const DeterministicFamily& fam, std::span<const std::size_t> degrees) {
  FamilyReport rep;
  rep.degrees.assign(degrees.begin(), degrees.end());
  std::map<FamilyIndex, std::vector<Permutation>> cache;
  for (const auto& j : fam.indices()) {
    TraceTrajectory tt;
    tt.index = j;
    auto& mats = cache[j];
    for (auto d : degrees) {
      mats.push_back(fam.matrix(j, d));
      tt.traces.push_back(make_rational(mats.back().fixed_points(), d));
    }
    tt.vanishing = trends_to_zero(tt.traces);
    rep.traces.push_back(std::move(tt));
  }

  for (const auto& a : fam.indices())
    for (const auto& b : fam.indices()) {
      PairTrajectory pt;
      pt.first = a;
      pt.second = b;
      pt.declared = fam.product(a, b);
      for (std::size_t k = 0; k < degrees.size(); ++k) {
        const std::size_t d = degrees[k];
        const Permutation ab = compose(cache[a][k], cache[b][k]);
        pt.dist_to_identity.push_back(normalized_hamming(ab, Permutation::identity(d)));
        if (pt.declared.kind == ProductRule::Kind::exact)
          pt.exact_match.push_back(ab == fam.matrix(pt.declared.index, d));
      }
      switch (pt.declared.kind) {
        case ProductRule::Kind::exact:
          pt.closed = std::all_of(pt.exact_match.begin(), pt.exact_match.end(), [](bool x) { return x; });
          break;
        case ProductRule::Kind::near_identity:
          pt.closed = trends_to_zero(pt.dist_to_identity);
          break;
        case ProductRule::Kind::none:
          pt.closed = false;
          break;
      }
      rep.pairs.push_back(std::move(pt));
    }

  rep.traces_ok = std::all_of(rep.traces.begin(), rep.traces.end(), [](const auto& t) { return t.vanishing; });
  rep.closure_ok = std::all_of(rep.pairs.begin(), rep.pairs.end(), [](const auto& p) { return p.closed; });
  return rep;
}

std::size_t MixedMomentSpec::generator_span() const {
  std::size_t span = 0;
  for (const auto& w : words) span = std::max(span, w.generator_span());
  return span;
}

void MixedMomentSpec::validate() const {
  if (words.size() != blocks.size() + 1)
    throw InputError("mixed moment needs one more word than blocks, got " + std::to_string(words.size()) +
                     " words and " + std::to_string(blocks.size()) + " blocks");
  for (std::size_t k = 1; k + 1 < words.size(); ++k)
    if (words[k].reduced().empty()) throw InputError("inner word w_" + std::to_string(k) + " is trivial");
  if (blocks.empty() && words[0].reduced().empty()) throw InputError("a pattern with no blocks needs a nontrivial word");
}

std::string to_string(MixedForm f) {
  switch (f) {
    case MixedForm::pure_word: return "pure_word";
    case MixedForm::pure_block: return "pure_block";
    case MixedForm::alternating: return "alternating";
  }
  return "?";
}

ReducedMixed cyclic_reduce_mixed(const MixedMomentSpec& spec, const DeterministicFamily& fam) {
  spec.validate();
  for (const auto& j : spec.blocks)
    if (!fam.contains(j)) throw DomainError("pattern uses index " + format_element(j) + " outside the family");

  ReducedMixed out;
  const std::size_t n = spec.blocks.size();
  if (n == 0) {
    out.form = MixedForm::pure_word;
    out.connectives = {spec.words[0].reduced()};
    return out;
  }

  // Entry k is B_{blocks[k]} followed by connectives[k]; the last connective wraps w_n w_0.
  std::vector<FamilyIndex> blocks = spec.blocks;
  std::vector<FreeWord> conn;
  for (std::size_t k = 1; k < n; ++k) conn.push_back(spec.words[k].reduced());
  conn.push_back((spec.words[n] * spec.words[0]).reduced());

  while (!blocks.empty()) {
    const std::size_t m = blocks.size();
    std::size_t k = 0;
    while (k < m && !conn[k].empty()) ++k;
    if (k == m) break;
    if (m == 1) {
      out.form = MixedForm::pure_block;
      out.blocks = std::move(blocks);
      out.connectives = std::move(conn);
      return out;
    }
    const std::size_t next = (k + 1) % m;
    const ProductRule rule = fam.product(blocks[k], blocks[next]);
    if (rule.kind == ProductRule::Kind::exact) {
      blocks[k] = rule.index;
      conn[k] = conn[next];
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(next));
      conn.erase(conn.begin() + static_cast<std::ptrdiff_t>(next));
    } else if (rule.kind == ProductRule::Kind::near_identity) {
      ++out.approximations;
      if (m == 2) {
        out.form = MixedForm::pure_word;
        out.connectives = {conn[next]};
        return out;
      }
      const std::size_t prev = (k + m - 1) % m;
      conn[prev] = (conn[prev] * conn[next]).reduced();
      const auto lo = std::min(k, next), hi = std::max(k, next);
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(hi));
      conn.erase(conn.begin() + static_cast<std::ptrdiff_t>(hi));
      blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(lo));
      conn.erase(conn.begin() + static_cast<std::ptrdiff_t>(lo));
    } else {
      throw ClosureViolation("family '" + fam.name() + "' has no closure rule for the pair " +
                             format_element(blocks[k]) + ", " + format_element(blocks[next]));
    }
  }
  out.form = MixedForm::alternating;
  out.blocks = std::move(blocks);
  out.connectives = std::move(conn);
  return out;
}

DecayTrajectory nica_decay(const FreeWord& w, std::span<const std::size_t> degrees, std::size_t samples,
                           std::uint64_t seed, unsigned workers) {
  const FreeWord red = w.reduced();
  if (red.empty()) throw InputError("nica_decay needs a nontrivial word");
  if (samples == 0) throw InputError("samples must be >= 1");
  DecayTrajectory traj;
  for (auto d : degrees) {
    if (d == 0) throw InputError("degree must be positive");
    const std::uint64_t key = derive_seed(seed, {d});
    auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
      CounterRng rng(derive_seed(key, {i}));
      const auto gens = draw_generators(red.generator_span(), d, rng);
      const auto word = evaluate(red, gens, inverses_of(gens));
      return static_cast<double>(word.fixed_points()) / static_cast<double>(d);
    });
    DecayPoint pt{d, summarize_samples(values)};
    pt.estimate.seed = key;
    traj.push_back(pt);
  }
  return traj;
}

DecayTrajectory mixed_decay(const MixedMomentSpec& spec, const DeterministicFamily& fam,
                            std::span<const std::size_t> degrees, std::size_t samples, std::uint64_t seed,
                            unsigned workers) {
  spec.validate();
  if (samples == 0) throw InputError("samples must be >= 1");
  DecayTrajectory traj;
  for (auto d : degrees) {
    std::vector<Permutation> blocks;
    for (const auto& j : spec.blocks) blocks.push_back(fam.matrix(j, d));
    const std::uint64_t key = derive_seed(seed, {d});
    auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
      CounterRng rng(derive_seed(key, {i}));
      const auto gens = draw_generators(spec.generator_span(), d, rng);
      const auto inv = inverses_of(gens);
      std::vector<Permutation> words;
      for (const auto& w : spec.words) words.push_back(evaluate(w, gens, inv));
      std::vector<const Permutation*> factors;
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        factors.push_back(&words[k]);
        factors.push_back(&blocks[k]);
      }
      factors.push_back(&words.back());
      return static_cast<double>(product_fixed_points(factors, d)) / static_cast<double>(d);
    });
    DecayPoint pt{d, summarize_samples(values)};
    pt.estimate.seed = key;
    traj.push_back(pt);
  }
  return traj;
}

DecayTrajectory mixed_decay_conjugated(const ReducedMixed& form, const DeterministicFamily& fam,
                                       std::span<const std::size_t> degrees, std::size_t samples,
                                       std::uint64_t seed, unsigned workers) {
  if (samples == 0) throw InputError("samples must be >= 1");
  std::size_t span = 0;
  for (const auto& w : form.connectives) span = std::max(span, w.generator_span());
  DecayTrajectory traj;
  for (auto d : degrees) {
    std::vector<Permutation> blocks;
    for (const auto& j : form.blocks) blocks.push_back(fam.matrix(j, d));
    const std::uint64_t key = derive_seed(seed, {d, 1});
    auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
      CounterRng rng(derive_seed(key, {i}));
      const auto gens = draw_generators(span, d, rng);
      const auto inv = inverses_of(gens);
      const Permutation V = random_permutation(d, rng);
      const Permutation V_inv = V.inverse();
      std::vector<Permutation> words;
      for (const auto& w : form.connectives) words.push_back(evaluate(w, gens, inv));
      std::vector<const Permutation*> factors;
      if (blocks.empty()) {
        factors = {&V, &words.front(), &V_inv};
      } else {
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          factors.push_back(&blocks[k]);
          if (!form.connectives[k].empty()) {
            factors.push_back(&V);
            factors.push_back(&words[k]);
            factors.push_back(&V_inv);
          }
        }
      }
      return static_cast<double>(product_fixed_points(factors, d)) / static_cast<double>(d);
    });
    DecayPoint pt{d, summarize_samples(values)};
    pt.estimate.seed = key;
    traj.push_back(pt);
  }
  return traj;
}

bool agree_within(const McEstimate& a, const McEstimate& b, double sigmas) {
  const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  return std::abs(a.mean - b.mean) <= sigmas * combined;
}

DecayVerdict assess_decay(const DecayTrajectory& traj, double threshold) {
  DecayVerdict v;
  if (traj.empty()) return v;
  v.monotone = true;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const auto& a = traj[k - 1].estimate;
    const auto& b = traj[k].estimate;
    const double combined = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    v.monotone = v.monotone && b.mean <= a.mean + 2 * combined;
  }
  v.final_small = std::abs(traj.back().estimate.mean) <= threshold;
  return v;
}

}  // namespace soficperm
