#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "soficperm/group.hpp"
#include "soficperm/rational.hpp"

namespace soficperm {

/// A finite T containing e together with a (possibly infinite) set of
/// centers C, enumerated on demand: centers(R) lists the centers of word
/// length <= R.
struct Tile {
  GroupPtr group;
  std::vector<Element> tile;
  std::function<std::vector<Element>(std::size_t radius)> centers;

  /// T = {0..L-1} in Z with centers L Z.
  static Tile interval(std::size_t L);
  /// T = [0, L)^k in Z^k with centers L Z^k.
  static Tile lattice_box(std::size_t rank, std::size_t L);
  /// T = G, C = {e}, for finite G.
  static Tile whole_group(GroupPtr finite_group);
  /// Explicit finite T and C.
  static Tile explicit_centers(GroupPtr group, std::vector<Element> tile, std::vector<Element> centers);
  /// T given, C = period * Z^k (for Z^k groups).
  static Tile periodic(GroupPtr lattice, std::vector<Element> tile, std::size_t period);

  /// Max word length over T and T^{-1}.
  std::size_t radius() const;
};

/// Checks that (t, c) -> t c is injective on T x C(window) and that every
/// element of ball(window_radius) is hit.
bool verify_tile(const Tile& t, std::size_t window_radius);

struct TiledFolnerSet {
  std::vector<Element> centers;  // D, a subset of C
  std::vector<Element> set;      // F = T D, sorted
  Rational defect{0};            // |K F \ F| / |F|
};

/// A (K, eps)-invariant F = T D with D inside the centers: take E invariant
/// for T T^{-1} (at eps / 2|K|) and for K (at eps / 2), then D = T^{-1} E meet C.
/// Supported for Z^k and finite groups; throws UnsupportedGroup otherwise,
/// InputError when eps <= 0.
TiledFolnerSet tiled_folner(const Tile& t, std::span<const Element> K, double eps);

}  // namespace soficperm
