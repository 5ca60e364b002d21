#include "soficperm/tile.hpp"

#include <algorithm>
#include <set>

#include "soficperm/errors.hpp"
#include "soficperm/quasi_action.hpp"

namespace soficperm {
namespace {

// Multiples of `period` in Z^rank with L1 norm at most `radius`.
std::vector<Element> lattice_multiples(std::size_t rank, std::size_t period, std::size_t radius) {
  const auto span = static_cast<std::int64_t>(radius / period);
  std::vector<Element> out;
  Element cur(rank, -span);
  while (true) {
    std::int64_t norm = 0;
    for (auto c : cur) norm += std::abs(c);
    if (norm * static_cast<std::int64_t>(period) <= static_cast<std::int64_t>(radius)) {
      Element e(rank);
      for (std::size_t i = 0; i < rank; ++i) e[i] = cur[i] * static_cast<std::int64_t>(period);
      out.push_back(std::move(e));
    }
    std::size_t i = 0;
    while (i < rank && cur[i] == span) cur[i++] = -span;
    if (i == rank) break;
    ++cur[i];
  }
  return out;
}

std::vector<Element> box(std::size_t rank, std::int64_t lo, std::int64_t hi) {
  std::vector<Element> out;
  Element cur(rank, lo);
  while (true) {
    out.push_back(cur);
    std::size_t i = 0;
    while (i < rank && cur[i] == hi) cur[i++] = lo;
    if (i == rank) break;
    ++cur[i];
  }
  return out;
}

}  // namespace

Tile Tile::interval(std::size_t L) { return lattice_box(1, L); }

Tile Tile::lattice_box(std::size_t rank, std::size_t L) {
  if (L == 0 || rank == 0) throw InputError("lattice_box needs rank >= 1 and L >= 1");
  auto G = std::make_shared<IntegerLattice>(rank);
  return periodic(G, box(rank, 0, static_cast<std::int64_t>(L) - 1), L);
}

Tile Tile::whole_group(GroupPtr G) {
  auto elems = G->elements();
  if (!elems) throw UnsupportedGroup("whole_group tile needs a finite group, got " + G->name());
  const Element e = G->identity();
  return Tile{G, std::move(*elems), [e](std::size_t) { return std::vector<Element>{e}; }};
}

Tile Tile::explicit_centers(GroupPtr G, std::vector<Element> tile, std::vector<Element> centers) {
  for (const auto& x : tile) G->validate(x);
  for (const auto& x : centers) G->validate(x);
  if (std::find(tile.begin(), tile.end(), G->identity()) == tile.end())
    throw InputError("tile must contain the identity");
  GroupPtr held = G;
  return Tile{std::move(G), std::move(tile), [held, centers](std::size_t R) {
                std::vector<Element> out;
                for (const auto& c : centers) {
                  auto len = held->word_length(c, R);
                  if (len && *len <= R) out.push_back(c);
                }
                return out;
              }};
}

Tile Tile::periodic(GroupPtr G, std::vector<Element> tile, std::size_t period) {
  const auto* lattice = dynamic_cast<const IntegerLattice*>(G.get());
  if (!lattice) throw UnsupportedGroup("periodic centers need Z^k, got " + G->name());
  if (period == 0) throw InputError("period must be positive");
  for (const auto& x : tile) G->validate(x);
  if (std::find(tile.begin(), tile.end(), G->identity()) == tile.end())
    throw InputError("tile must contain the identity");
  const std::size_t rank = lattice->rank();
  return Tile{std::move(G), std::move(tile),
              [rank, period](std::size_t R) { return lattice_multiples(rank, period, R); }};
}

std::size_t Tile::radius() const {
  std::size_t r = 0;
  for (const auto& x : tile)
    for (const auto& y : {x, group->inverse(x)}) {
      auto len = group->word_length(y, 64);
      if (!len) throw UnsupportedGroup("tile element " + format_element(y) + " is too long");
      r = std::max(r, *len);
    }
  return r;
}

bool verify_tile(const Tile& t, std::size_t window_radius) {
  const Group& G = *t.group;
  // Any tc in ball(R) has |c| <= |t^{-1}| + R, so this window sees every relevant center.
  const auto centers = t.centers(window_radius + t.radius());
  std::set<Element> hit;
  bool injective = true;
  for (const auto& c : centers)
    for (const auto& x : t.tile) injective = hit.insert(G.multiply(x, c)).second && injective;
  if (!injective) return false;
  for (const auto& g : G.ball(window_radius))
    if (!hit.contains(g)) return false;
  return true;
}

TiledFolnerSet tiled_folner(const Tile& t, std::span<const Element> K, double eps) {
  if (!(eps > 0)) throw InputError("tiled_folner: eps must be positive");
  const Group& G = *t.group;
  const auto* lattice = dynamic_cast<const IntegerLattice*>(&G);
  const auto finite = G.elements();
  if (!lattice && !finite) throw UnsupportedGroup("tiled_folner supports Z^k and finite groups, not " + G.name());

  auto finish = [&](std::vector<Element> D) {
    std::sort(D.begin(), D.end());
    D.erase(std::unique(D.begin(), D.end()), D.end());
    std::set<Element> F;
    for (const auto& c : D)
      for (const auto& x : t.tile) F.insert(G.multiply(x, c));
    TiledFolnerSet out;
    out.centers = std::move(D);
    out.set.assign(F.begin(), F.end());
    out.defect = folner_defect(G, K, out.set);
    return out;
  };

  if (eps > static_cast<double>(K.size())) {
    auto C = t.centers(0);
    if (C.empty()) C = t.centers(t.radius() + 1);
    if (C.empty()) throw InputError("tile has no centers near the identity");
    return finish({C.front()});
  }

  std::vector<Element> TTinv;
  for (const auto& a : t.tile)
    for (const auto& b : t.tile) TTinv.push_back(G.multiply(a, G.inverse(b)));
  const double k_size = std::max<double>(1, static_cast<double>(K.size()));
  const std::size_t tile_radius = t.radius();

  for (std::size_t M = 1; M <= (std::size_t{1} << 16); M *= 2) {
    const auto E = *G.folner_box(M);
    if (to_double(folner_defect(G, TTinv, E)) >= eps / (2 * k_size)) continue;
    if (to_double(folner_defect(G, K, E)) >= eps / 2) continue;
    std::size_t reach = tile_radius + (finite ? finite->size() : lattice->rank() * M);
    const auto Cwin = t.centers(reach);
    const std::set<Element> cset(Cwin.begin(), Cwin.end());
    std::vector<Element> D;
    for (const auto& x : t.tile) {
      const Element xinv = G.inverse(x);
      for (const auto& e : E) {
        auto c = G.multiply(xinv, e);
        if (cset.contains(c)) D.push_back(std::move(c));
      }
    }
    auto out = finish(std::move(D));
    if (!out.set.empty() && to_double(out.defect) < eps) return out;
    if (finite) break;
  }
  throw InputError("tiled_folner: no invariant set found within the search limit");
}

}  // namespace soficperm
