#include "soficperm/quasi_action.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "soficperm/errors.hpp"
#include "soficperm/parallel.hpp"

namespace soficperm {

QuasiAction::QuasiAction(GroupPtr group, std::size_t degree, std::map<Element, Permutation> table)
    : group_(std::move(group)), degree_(degree), table_(std::move(table)) {
  if (!group_) throw InputError("quasi-action needs a group");
  for (const auto& [g, p] : table_) {
    group_->validate(g);
    if (p.degree() != degree_)
      throw InputError("quasi-action table entry " + format_element(g) + " has degree " +
                       std::to_string(p.degree()) + ", expected " + std::to_string(degree_));
  }
}

const Permutation& QuasiAction::at(const Element& g) const {
  auto it = table_.find(g);
  if (it == table_.end())
    throw DomainError("element " + format_element(g) + " is outside the quasi-action domain");
  return it->second;
}

std::vector<Element> QuasiAction::domain() const {
  std::vector<Element> out;
  out.reserve(table_.size());
  for (const auto& [g, p] : table_) out.push_back(g);
  return out;
}

QuasiAction QuasiAction::regular(GroupPtr G) {
  auto elems = G->elements();
  if (!elems) throw UnsupportedGroup("regular action needs a finite group, got " + G->name());
  std::map<Element, std::size_t> index;
  for (std::size_t k = 0; k < elems->size(); ++k) index[(*elems)[k]] = k;
  std::map<Element, Permutation> table;
  for (const auto& g : *elems) {
    std::vector<std::uint32_t> img(elems->size());
    for (std::size_t k = 0; k < elems->size(); ++k)
      img[k] = static_cast<std::uint32_t>(index.at(G->multiply(g, (*elems)[k])));
    table.emplace(g, from_trusted_image(std::move(img)));
  }
  const auto n = elems->size();
  return QuasiAction(std::move(G), n, std::move(table));
}

QuasiAction QuasiAction::from_generator_images(GroupPtr G, std::vector<Permutation> gens,
                                               std::span<const Element> domain) {
  if (gens.size() != G->generator_count())
    throw InputError("need one permutation per generator of " + G->name());
  const std::size_t n = gens.empty() ? 1 : gens.front().degree();
  // Breadth-first over the Cayley graph until every domain element is reached.
  std::map<Element, Permutation> known{{G->identity(), Permutation::identity(n)}};
  std::set<Element> wanted(domain.begin(), domain.end());
  std::vector<Element> frontier{G->identity()};
  std::size_t missing = wanted.size() - wanted.count(G->identity());
  for (std::size_t r = 0; missing > 0 && !frontier.empty() && r < 256; ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      const Permutation px = known.at(x);
      for (std::size_t i = 0; i < gens.size(); ++i) {
        const std::pair<Element, Permutation> steps[2] = {
            {G->generator(i), gens[i]}, {G->inverse(G->generator(i)), gens[i].inverse()}};
        for (const auto& [s, ps] : steps) {
          auto y = G->multiply(x, s);
          if (known.contains(y)) continue;
          known.emplace(y, compose(px, ps));
          if (wanted.contains(y)) --missing;
          next.push_back(std::move(y));
        }
      }
    }
    frontier = std::move(next);
  }
  if (missing > 0) throw DomainError("could not reach every domain element from the generators");
  std::map<Element, Permutation> table;
  for (const auto& g : wanted) table.emplace(g, known.at(g));
  return QuasiAction(std::move(G), n, std::move(table));
}

Permutation complete_partial_injection(std::span<const std::int64_t> partial) {
  const std::size_t n = partial.size();
  std::vector<bool> hit(n, false);
  for (auto v : partial) {
    if (v < 0) continue;
    if (static_cast<std::size_t>(v) >= n || hit[v]) throw InputError("partial map is not injective");
    hit[v] = true;
  }
  std::vector<std::uint32_t> free_targets;
  for (std::size_t t = 0; t < n; ++t)
    if (!hit[t]) free_targets.push_back(static_cast<std::uint32_t>(t));
  std::vector<std::uint32_t> img(n);
  std::size_t next = 0;
  for (std::size_t k = 0; k < n; ++k)
    img[k] = partial[k] >= 0 ? static_cast<std::uint32_t>(partial[k]) : free_targets[next++];
  return from_trusted_image(std::move(img));
}

QuasiAction QuasiAction::truncated_shift(std::size_t n, std::size_t domain_radius, Wrap wrap) {
  if (n == 0) throw InputError("truncated_shift: n must be positive");
  auto Z = std::make_shared<IntegerLattice>(1);
  std::map<Element, Permutation> table;
  const auto R = static_cast<std::int64_t>(domain_radius);
  const auto N = static_cast<std::int64_t>(n);
  for (std::int64_t g = -R; g <= R; ++g) {
    std::vector<std::int64_t> partial(n, SubPermMatrix::kEmpty);
    std::vector<bool> hit(n, false);
    for (std::int64_t x = 0; x < N; ++x)
      if (x + g >= 0 && x + g < N) {
        partial[x] = x + g;
        hit[x + g] = true;
      }
    std::vector<std::int64_t> targets;
    for (std::int64_t t = 0; t < N; ++t)
      if (!hit[t]) targets.push_back(t);
    if (wrap == Wrap::reflect) std::reverse(targets.begin(), targets.end());
    std::size_t next = 0;
    for (auto& v : partial)
      if (v < 0) v = targets[next++];
    table.emplace(Element{g}, complete_partial_injection(partial));
  }
  return QuasiAction(std::move(Z), n, std::move(table));
}

QuasiAction QuasiAction::amplify(std::size_t factor) const {
  if (factor == 0) throw InputError("amplification factor must be positive");
  std::map<Element, Permutation> table;
  for (const auto& [g, p] : table_) {
    std::vector<std::uint32_t> img(degree_ * factor);
    for (std::size_t x = 0; x < degree_; ++x)
      for (std::size_t a = 0; a < factor; ++a)
        img[x * factor + a] = static_cast<std::uint32_t>(p[x] * factor + a);
    table.emplace(g, from_trusted_image(std::move(img)));
  }
  return QuasiAction(group_, degree_ * factor, std::move(table));
}

DefectReport measure_defect(const QuasiAction& qa, std::span<const Element> F, unsigned workers) {
  const Group& G = qa.group();
  std::vector<const Permutation*> phi;
  std::vector<Permutation> phi_inv;
  for (const auto& g : F) {
    phi.push_back(&qa.at(g));
    phi_inv.push_back(phi.back()->inverse());
  }
  const std::size_t n = qa.degree();

  auto worst_per_row = parallel_map<std::size_t>(F.size(), workers, [&](std::size_t a) {
    const Element g1_inv = G.inverse(F[a]);
    std::size_t worst = 0;
    for (std::size_t b = 0; b < F.size(); ++b) {
      const Permutation& q = qa.at(G.multiply(g1_inv, F[b]));
      std::size_t diff = 0;
      for (std::size_t k = 0; k < n; ++k) diff += q[k] != phi_inv[a][(*phi[b])[k]];
      worst = std::max(worst, diff);
    }
    return worst;
  });

  DefectReport rep;
  std::size_t mult = 0, fixed = 0;
  for (auto w : worst_per_row) mult = std::max(mult, w);
  for (std::size_t a = 0; a < F.size(); ++a)
    if (!G.is_identity(F[a])) fixed = std::max(fixed, phi[a]->fixed_points());
  if (n > 0) {
    rep.multiplicativity_defect = make_rational(mult, n);
    rep.freeness_defect = make_rational(fixed, n);
  }
  return rep;
}

Rational folner_defect(const Group& G, std::span<const Element> K, std::span<const Element> F) {
  if (F.empty()) throw InputError("folner_defect: F must be nonempty");
  const std::set<Element> fset(F.begin(), F.end());
  std::set<Element> outside;
  for (const auto& k : K)
    for (const auto& f : fset) {
      auto kf = G.multiply(k, f);
      if (!fset.contains(kf)) outside.insert(std::move(kf));
    }
  return make_rational(outside.size(), fset.size());
}

SoficWitness assemble_witness(std::span<const QuasiAction> seq, std::span<const Element> targets) {
  if (seq.empty()) throw InputError("assemble_witness: empty sequence");
  SoficWitness w;
  w.targets.assign(targets.begin(), targets.end());
  const Group& G = seq.front().group();
  std::vector<Element> F{G.identity()};
  for (const auto& t : targets)
    if (std::find(F.begin(), F.end(), t) == F.end()) F.push_back(t);

  for (const auto& qa : seq) {
    WitnessStep step;
    step.degree = qa.degree();
    step.defect = measure_defect(qa, F);
    const auto id = Permutation::identity(qa.degree());
    for (const auto& t : targets) step.dist_to_identity.push_back(normalized_hamming(qa.at(t), id));
    w.steps.push_back(std::move(step));
  }

  bool ok = true;
  for (std::size_t k = 1; k < w.steps.size(); ++k) {
    const auto& a = w.steps[k - 1];
    const auto& b = w.steps[k];
    ok = ok && b.defect.multiplicativity_defect <= a.defect.multiplicativity_defect &&
         b.defect.freeness_defect <= a.defect.freeness_defect;
    for (std::size_t t = 0; t < targets.size(); ++t)
      ok = ok && (G.is_identity(targets[t]) || b.dist_to_identity[t] >= a.dist_to_identity[t]);
  }
  const Rational first = w.steps.front().defect.worst();
  const Rational last = w.steps.back().defect.worst();
  w.trend_ok = ok && (last == 0 || last < first);
  return w;
}

}  // namespace soficperm
