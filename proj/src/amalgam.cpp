#include "soficperm/amalgam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

#include "soficperm/errors.hpp"
#include "soficperm/parallel.hpp"
#include "soficperm/rng.hpp"

namespace soficperm {

// ------------------------------------------------------------ embeddings

SubgroupEmbedding::SubgroupEmbedding(GroupPtr subgroup, GroupPtr ambient, std::vector<Element> images)
    : sub_(std::move(subgroup)), amb_(std::move(ambient)) {
  if (images.size() != sub_->generator_count())
    throw InputError("embedding needs one image per generator of " + sub_->name());
  for (const auto& g : images) amb_->validate(g);

  const auto elems = sub_->elements();
  if (!elems) {
    bool same = sub_->descriptor() == amb_->descriptor();
    for (std::size_t i = 0; same && i < images.size(); ++i) same = images[i] == amb_->generator(i);
    if (!same) throw UnsupportedGroup("an infinite subgroup is only supported as the identity embedding");
    identity_ = true;
    return;
  }

  // Walk the Cayley graph of H; every edge must be respected.
  forward_[sub_->identity()] = amb_->identity();
  std::vector<Element> frontier{sub_->identity()};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (std::size_t i = 0; i < images.size(); ++i) {
        auto y = sub_->multiply(x, sub_->generator(i));
        auto img = amb_->multiply(forward_.at(x), images[i]);
        auto it = forward_.find(y);
        if (it == forward_.end()) {
          forward_.emplace(y, std::move(img));
          next.push_back(std::move(y));
        } else if (it->second != img) {
          throw InputError("generator images do not define a homomorphism from " + sub_->name());
        }
      }
    frontier = std::move(next);
  }
  for (const auto& [h, g] : forward_)
    if (!backward_.emplace(g, h).second) throw InputError("embedding of " + sub_->name() + " is not injective");
}

SubgroupEmbedding SubgroupEmbedding::trivial(GroupPtr ambient) {
  return SubgroupEmbedding(std::make_shared<CyclicGroup>(1), std::move(ambient), {});
}

SubgroupEmbedding SubgroupEmbedding::identity(GroupPtr group) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < group->generator_count(); ++i) gens.push_back(group->generator(i));
  return SubgroupEmbedding(group, group, std::move(gens));
}

Element SubgroupEmbedding::image(const Element& h) const {
  if (identity_) {
    sub_->validate(h);
    return h;
  }
  auto it = forward_.find(h);
  if (it == forward_.end()) throw DomainError(format_element(h) + " is not an element of " + sub_->name());
  return it->second;
}

bool SubgroupEmbedding::contains(const Element& g) const { return identity_ || backward_.contains(g); }

std::optional<Element> SubgroupEmbedding::preimage(const Element& g) const {
  if (identity_) return g;
  auto it = backward_.find(g);
  if (it == backward_.end()) return std::nullopt;
  return it->second;
}

// ------------------------------------------------------------ alignment

Permutation TileAlignedQA::tile_action(const Element& h) const {
  const Group& H = embedding->subgroup();
  std::vector<std::int64_t> partial(tile.size(), SubPermMatrix::kEmpty);
  for (std::size_t k = 0; k < tile.size(); ++k) {
    auto it = std::find(tile.begin(), tile.end(), H.multiply(h, tile[k]));
    if (it != tile.end()) partial[k] = it - tile.begin();
  }
  return complete_partial_injection(partial);
}

TileAlignedQA align_to_tile(const QuasiAction& qa, EmbeddingPtr embedding, const Tile& tile,
                            std::span<const Element> K, std::span<const Element> F) {
  const Group& G = qa.group();
  const Group& H = embedding->subgroup();
  if (G.descriptor() != embedding->ambient().descriptor())
    throw AlignmentError("embedding targets " + embedding->ambient().name() + ", quasi-action is of " + G.name());
  if (tile.tile.empty()) throw InputError("empty tile");
  for (const auto& h : K) H.validate(h);

  std::vector<const Permutation*> tile_perms;
  for (const auto& t : tile.tile) {
    const Element g = embedding->image(t);
    if (!qa.contains(g)) throw AlignmentError("tile element " + format_element(t) + " is outside the domain");
    tile_perms.push_back(&qa.at(g));
  }

  const std::size_t n = qa.degree();
  const std::size_t m = tile.tile.size();
  std::vector<bool> used(n, false);
  std::vector<std::size_t> reps;
  std::vector<std::uint32_t> pts(m);
  for (std::size_t x = 0; x < n; ++x) {
    bool ok = true;
    for (std::size_t t = 0; t < m && ok; ++t) {
      pts[t] = (*tile_perms[t])[x];
      ok = !used[pts[t]] && std::find(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(t), pts[t]) ==
                                pts.begin() + static_cast<std::ptrdiff_t>(t);
    }
    if (!ok) continue;
    for (auto p : pts) used[p] = true;
    reps.push_back(x);
  }
  if (reps.empty()) throw AlignmentError("no tile orbit fits inside the quasi-action");

  const std::size_t Z = reps.size();
  const std::size_t covered = Z * m;
  // alpha: covered point -> t * Z + z
  std::vector<std::int64_t> alpha(n, SubPermMatrix::kEmpty);
  for (std::size_t z = 0; z < Z; ++z)
    for (std::size_t t = 0; t < m; ++t) alpha[(*tile_perms[t])[reps[z]]] = static_cast<std::int64_t>(t * Z + z);

  TileAlignedQA out;
  out.embedding = embedding;
  out.tile = tile.tile;
  out.aux_size = Z;
  out.K.assign(K.begin(), K.end());
  out.measure_set.assign(F.begin(), F.end());

  std::map<Element, Permutation> table;
  for (const auto& [g, p] : qa.table()) {
    std::vector<std::int64_t> partial(covered, SubPermMatrix::kEmpty);
    for (std::size_t y = 0; y < n; ++y)
      if (alpha[y] >= 0 && alpha[p[y]] >= 0) partial[alpha[y]] = alpha[p[y]];
    table.emplace(g, complete_partial_injection(partial));
  }
  for (const auto& h : K) {
    const Permutation rho = out.tile_action(h);
    std::vector<std::uint32_t> img(covered);
    for (std::size_t t = 0; t < m; ++t)
      for (std::size_t z = 0; z < Z; ++z) img[t * Z + z] = static_cast<std::uint32_t>(rho[t] * Z + z);
    table.insert_or_assign(embedding->image(h), from_trusted_image(std::move(img)));
  }
  out.action = QuasiAction(qa.group_ptr(), covered, std::move(table));

  auto& rep = out.report;
  rep.source_defect = measure_defect(qa, F).worst();
  rep.uncovered = make_rational(n - covered, n);
  rep.tiling_penalty = folner_defect(H, K, tile.tile);
  rep.budget = rep.source_defect + 6 * make_rational(n - covered, covered) + 6 * rep.tiling_penalty;
  rep.measured = measure_defect(out.action, F);
  return out;
}

TileAlignedQA amplify(const TileAlignedQA& aq, std::size_t factor) {
  TileAlignedQA out = aq;
  out.action = aq.action.amplify(factor);
  out.aux_size = aq.aux_size * factor;
  return out;
}

// ------------------------------------------------------------ blocks

Permutation BlockDecomposition::reassemble() const {
  std::vector<std::uint32_t> img(tile_size * aux_size);
  std::vector<bool> seen(img.size(), false);
  for (std::size_t t = 0; t < tile_size; ++t)
    for (std::size_t tp = 0; tp < tile_size; ++tp)
      for (auto [row, col] : block(t, tp).entries()) {
        const std::size_t src = tp * aux_size + col;
        if (seen[src]) throw InputError("blocks overlap in a column");
        seen[src] = true;
        img[src] = static_cast<std::uint32_t>(t * aux_size + row);
      }
  return Permutation(std::move(img));
}

Rational BlockDecomposition::max_block_trace() const {
  Rational best{0};
  for (const auto& b : blocks) best = std::max(best, normalized_trace(b));
  return best;
}

BlockDecomposition extract_blocks(const TileAlignedQA& aq, const Element& g) {
  const Permutation& p = aq.action.at(g);
  const std::size_t m = aq.tile_size(), Z = aq.aux_size;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> entries(m * m);
  for (std::size_t src = 0; src < m * Z; ++src) {
    const std::size_t dst = p[src];
    entries[(dst / Z) * m + src / Z].emplace_back(static_cast<std::uint32_t>(dst % Z),
                                                  static_cast<std::uint32_t>(src % Z));
  }
  BlockDecomposition out{g, m, Z, {}};
  out.blocks.reserve(m * m);
  for (const auto& e : entries) out.blocks.push_back(SubPermMatrix::from_entries(Z, e));
  return out;
}

Rational block_trace_ceiling(const TileAlignedQA& aq) {
  return 2 * aq.report.measured.worst() * static_cast<unsigned long>(aq.tile_size());
}

// ------------------------------------------------------------ vanishing

namespace {

void check_shared_tile(const TileAlignedQA& a, const TileAlignedQA& b) {
  if (a.tile != b.tile) throw AlignmentError("the two factors use different tiles");
  if (a.aux_size != b.aux_size)
    throw AlignmentError("auxiliary sets differ: " + std::to_string(a.aux_size) + " vs " + std::to_string(b.aux_size));
  if (a.embedding->subgroup().descriptor() != b.embedding->subgroup().descriptor())
    throw AlignmentError("the factors embed different subgroups");
}

std::vector<const Permutation*> word_factors(const TileAlignedQA& qa1, const TileAlignedQA& qa2,
                                             const AlternatingWord& word) {
  if (word.elements.empty() || word.elements.size() % 2 != 0)
    throw InputError("an alternating word needs an even, positive number of elements");
  std::vector<const Permutation*> out;
  for (std::size_t k = 0; k < word.elements.size(); ++k) {
    const TileAlignedQA& qa = k % 2 == 0 ? qa1 : qa2;
    const Element& g = word.elements[k];
    qa.action.group().validate(g);
    if (qa.embedding->contains(g))
      throw InputError("element " + format_element(g) + " at position " + std::to_string(k + 1) +
                       " lies in the amalgamated subgroup");
    out.push_back(&qa.action.at(g));
  }
  return out;
}

// Fixed points of phi_1(g_1) V phi_2(g_2) V^{-1} phi_1(g_3) ... with V = 1 (x) U.
std::size_t conjugated_fixed_points(std::span<const Permutation* const> factors, std::span<const std::uint32_t> U,
                                    std::span<const std::uint32_t> U_inv, std::size_t Z) {
  const std::size_t n = factors.front()->degree();
  std::size_t fixed = 0;
  for (std::size_t x0 = 0; x0 < n; ++x0) {
    std::size_t x = x0;
    for (std::size_t k = factors.size(); k-- > 0;) {
      if (k % 2 == 1) {
        x = (x / Z) * Z + U_inv[x % Z];
        x = (*factors[k])[x];
        x = (x / Z) * Z + U[x % Z];
      } else {
        x = (*factors[k])[x];
      }
    }
    fixed += x == x0;
  }
  return fixed;
}

}  // namespace

bool VanishingReport::within_ceiling() const {
  if (!ceiling_applies) return true;
  return estimate.mean <= to_double(ceiling) + 4 * estimate.std_error;
}

VanishingReport certify_vanishing(const TileAlignedQA& qa1, const TileAlignedQA& qa2, const AlternatingWord& word,
                                  std::size_t samples, std::uint64_t seed, unsigned workers, bool with_exact,
                                  const EngineConfig& cfg) {
  check_shared_tile(qa1, qa2);
  const auto factors = word_factors(qa1, qa2, word);
  if (samples == 0) throw InputError("samples must be >= 1");
  const std::size_t Z = qa1.aux_size, m = qa1.tile_size(), n = word.half_length();
  const std::size_t points = m * Z;

  VanishingReport rep;
  auto values = parallel_map<double>(samples, workers, [&](std::size_t i) {
    CounterRng rng(derive_seed(seed, {i}));
    std::vector<std::uint32_t> U(Z), U_inv(Z);
    random_permutation_into(U, rng);
    for (std::size_t z = 0; z < Z; ++z) U_inv[U[z]] = static_cast<std::uint32_t>(z);
    return static_cast<double>(conjugated_fixed_points(factors, U, U_inv, Z)) / static_cast<double>(points);
  });
  rep.estimate = summarize_samples(values);
  rep.estimate.seed = seed;

  const Rational C{bound_constant(n)};
  const Rational eta = std::max(qa1.report.measured.worst(), qa2.report.measured.worst());
  const Rational scale{ipow(m, static_cast<unsigned>(2 * n - 1))};
  const Rational tail = C * make_rational(1, Z);
  rep.ceiling = scale * (C * 2 * eta * static_cast<unsigned long>(m) + tail);

  std::vector<BlockDecomposition> decomp;
  Rational f{0};
  for (std::size_t k = 0; k < word.elements.size(); ++k) {
    decomp.push_back(extract_blocks(k % 2 == 0 ? qa1 : qa2, word.elements[k]));
    f = std::max(f, decomp.back().max_block_trace());
  }
  rep.block_ceiling = scale * (C * f + tail);
  rep.ceiling_applies = Z >= 4 * n;

  if (with_exact) {
    // (1/|T|) sum over t_1..t_{2n} of E tr_Z(B_{g_1,t_1,t_2} (U B_{g_2,t_2,t_3} U*) ... B_{g_2n,t_2n,t_1}).
    const std::size_t len = word.elements.size();
    Rational sum{0};
    std::vector<std::size_t> t(len, 0);
    while (true) {
      MomentSpec spec{Z, {}};
      bool nonzero = true;
      for (std::size_t k = 0; k < len && nonzero; ++k) {
        const auto& b = decomp[k].block(t[k], t[(k + 1) % len]);
        nonzero = b.nonzeros() > 0;
        spec.matrices.push_back(b);
      }
      if (nonzero) sum += exact_moment(spec, cfg);
      std::size_t k = 0;
      while (k < len && t[k] == m - 1) t[k++] = 0;
      if (k == len) break;
      ++t[k];
    }
    rep.exact = sum / static_cast<unsigned long>(m);
  }
  return rep;
}

Rational derandomized_trace(const TileAlignedQA& qa1, const TileAlignedQA& qa2, const AlternatingWord& word) {
  check_shared_tile(qa1, qa2);
  const auto factors = word_factors(qa1, qa2, word);
  const std::size_t Z = qa1.aux_size;
  if (Z > 6) throw BudgetExceeded("derandomized oracle runs |Z|! copies; needs |Z| <= 6");
  // The block-diagonal matrix over all U in Sym(Z) has trace equal to the
  // sum of the per-copy traces.
  std::vector<std::uint32_t> U(Z), U_inv(Z);
  std::iota(U.begin(), U.end(), 0u);
  std::size_t fixed = 0, copies = 0;
  do {
    for (std::size_t z = 0; z < Z; ++z) U_inv[U[z]] = static_cast<std::uint32_t>(z);
    fixed += conjugated_fixed_points(factors, U, U_inv, Z);
    ++copies;
  } while (std::next_permutation(U.begin(), U.end()));
  return make_rational(fixed, copies * qa1.action.degree());
}

// ------------------------------------------------------------ amalgam words

std::string to_string(WordCase c) {
  switch (c) {
    case WordCase::a: return "a";
    case WordCase::b: return "b";
    case WordCase::c: return "c";
    case WordCase::d: return "d";
  }
  return "?";
}

Amalgam::Amalgam(EmbeddingPtr first, EmbeddingPtr second) : emb_{std::move(first), std::move(second)} {
  if (emb_[0]->subgroup().descriptor() != emb_[1]->subgroup().descriptor())
    throw AlignmentError("the factors embed different subgroups");
}

const Group& Amalgam::factor(int i) const { return embedding(i).ambient(); }

const SubgroupEmbedding& Amalgam::embedding(int i) const {
  if (i != 1 && i != 2) throw InputError("factor index must be 1 or 2");
  return *emb_[i - 1];
}

AmalgamWord Amalgam::parse(const std::string& text) const {
  AmalgamWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    const auto colon = tok.find(':');
    if (colon == std::string::npos || (tok.substr(0, colon) != "1" && tok.substr(0, colon) != "2"))
      throw InputError("syllable '" + tok + "' must look like 1:word or 2:word");
    const int f = tok[0] - '0';
    std::string body = tok.substr(colon + 1);
    Element g;
    if (!body.empty() && body.front() == '[') {
      try {
        g = nlohmann::json::parse(body).get<Element>();
      } catch (const nlohmann::json::exception& e) {
        throw InputError("bad element '" + body + "': " + e.what());
      }
      factor(f).validate(g);
    } else {
      std::replace(body.begin(), body.end(), '*', ' ');
      g = factor(f).parse_word(body);
    }
    w.push_back({f, std::move(g)});
  }
  return w;
}

std::string Amalgam::format(const AmalgamWord& w) const {
  if (w.empty()) return "e";
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += std::to_string(s.factor) + ":" + format_element(s.element);
  }
  return out;
}

bool Amalgam::in_subgroup(const Syllable& s) const { return embedding(s.factor).contains(s.element); }

AmalgamWord Amalgam::reduce(const AmalgamWord& w) const {
  AmalgamWord cur;
  for (const auto& s : w) {
    factor(s.factor).validate(s.element);
    cur.push_back(s);
  }
  while (true) {
    AmalgamWord next;
    for (const auto& s : cur) {
      if (factor(s.factor).is_identity(s.element)) continue;
      if (!next.empty() && next.back().factor == s.factor) {
        next.back().element = factor(s.factor).multiply(next.back().element, s.element);
        if (factor(s.factor).is_identity(next.back().element)) next.pop_back();
      } else {
        next.push_back(s);
      }
    }
    bool moved = false;
    if (next.size() > 1)
      for (auto& s : next)
        if (in_subgroup(s)) {
          const int other = 3 - s.factor;
          s.element = embedding(other).image(*embedding(s.factor).preimage(s.element));
          s.factor = other;
          moved = true;
          break;
        }
    cur = std::move(next);
    if (!moved) break;
  }
  if (cur.size() == 1 && cur[0].factor == 2 && in_subgroup(cur[0]))
    cur[0] = {1, embedding(1).image(*embedding(2).preimage(cur[0].element))};
  return cur;
}

WordCase Amalgam::classify(const AmalgamWord& w) const {
  if (w.empty()) throw InputError("the trivial word has no case");
  if (w.size() == 1) return w[0].factor == 1 || in_subgroup(w[0]) ? WordCase::a : WordCase::b;
  if (w.size() % 2 == 0 && w[0].factor == 1) return WordCase::c;
  return WordCase::d;
}

Amalgam::Conjugation Amalgam::conjugate_to_core(const AmalgamWord& reduced) const {
  Conjugation out{{}, reduced};
  while (classify(out.core) == WordCase::d) {
    // f^{-1} (f m) f = m f
    const Syllable f = out.core.front();
    out.conjugator.push_back(f);
    AmalgamWord rotated(out.core.begin() + 1, out.core.end());
    rotated.push_back(f);
    out.core = reduce(rotated);
  }
  return out;
}

AmalgamWord Amalgam::inverse(const AmalgamWord& w) const {
  AmalgamWord out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->factor, factor(it->factor).inverse(it->element)});
  return out;
}

std::vector<AmalgamWord> Amalgam::reduced_words_up_to(std::size_t max_syllables) const {
  std::vector<Element> letters[2];
  for (int i = 1; i <= 2; ++i) {
    auto elems = factor(i).elements();
    if (!elems) throw UnsupportedGroup("word enumeration needs finite factors, got " + factor(i).name());
    for (auto& g : *elems)
      if (!embedding(i).contains(g)) letters[i - 1].push_back(std::move(g));
  }
  std::vector<AmalgamWord> out;
  for (int start = 1; start <= 2; ++start) {
    std::vector<AmalgamWord> layer{{}};
    for (std::size_t len = 1; len <= max_syllables; ++len) {
      std::vector<AmalgamWord> next;
      const int f = (len % 2 == 1) ? start : 3 - start;
      for (const auto& w : layer)
        for (const auto& g : letters[f - 1]) {
          AmalgamWord x = w;
          x.push_back({f, g});
          next.push_back(std::move(x));
          if (next.size() + out.size() > 100000) throw BudgetExceeded("too many reduced words to enumerate");
        }
      out.insert(out.end(), next.begin(), next.end());
      layer = std::move(next);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

// ------------------------------------------------------------ amalgam quasi-actions

AmalgamQA::AmalgamQA(std::shared_ptr<const TileAlignedQA> first, std::shared_ptr<const TileAlignedQA> second,
                     Permutation V, std::uint64_t seed)
    : qa_{std::move(first), std::move(second)}, V_(std::move(V)), V_inv_(V_.inverse()), seed_(seed) {}

Permutation AmalgamQA::syllable(const Syllable& s) const {
  if (s.factor == 1) return qa_[0]->action.at(s.element);
  if (s.factor == 2) return compose(V_, compose(qa_[1]->action.at(s.element), V_inv_));
  throw InputError("factor index must be 1 or 2");
}

Permutation AmalgamQA::product(const AmalgamWord& w) const {
  Permutation out = Permutation::identity(degree());
  for (const auto& s : w) out = compose(out, syllable(s));
  return out;
}

AmalgamQA build_amalgam(std::shared_ptr<const TileAlignedQA> first, std::shared_ptr<const TileAlignedQA> second,
                        std::uint64_t seed) {
  check_shared_tile(*first, *second);
  if (std::set<Element>(first->K.begin(), first->K.end()) != std::set<Element>(second->K.begin(), second->K.end()))
    throw AlignmentError("the factors use different K");
  for (const auto& h : first->K)
    if (first->action.at(first->embedding->image(h)) != second->action.at(second->embedding->image(h)))
      throw AlignmentError("the factors disagree on " + format_element(h) + " in K");

  const std::size_t Z = first->aux_size, m = first->tile_size();
  CounterRng rng(seed);
  const Permutation U = random_permutation(Z, rng);
  std::vector<std::uint32_t> img(m * Z);
  for (std::size_t t = 0; t < m; ++t)
    for (std::size_t z = 0; z < Z; ++z) img[t * Z + z] = static_cast<std::uint32_t>(t * Z + U[z]);
  return AmalgamQA(std::move(first), std::move(second), from_trusted_image(std::move(img)), seed);
}

WordDistance check_word_distance(const Amalgam& amalgam, std::span<const AmalgamQA> per_seed, const AmalgamWord& w) {
  WordDistance out;
  out.reduced = amalgam.reduce(w);
  if (out.reduced.empty()) throw InputError("word reduces to the identity");
  out.word_case = amalgam.classify(out.reduced);
  out.route = amalgam.conjugate_to_core(out.reduced);
  double sum = 0;
  for (const auto& a : per_seed) {
    const auto id = Permutation::identity(a.degree());
    out.seeds.push_back(a.seed());
    out.dist.push_back(normalized_hamming(a.product(out.route.core), id));
    out.direct_dist.push_back(normalized_hamming(a.product(out.reduced), id));
    sum += to_double(out.dist.back());
  }
  if (!per_seed.empty()) out.mean_dist = sum / static_cast<double>(per_seed.size());
  return out;
}

}  // namespace soficperm
