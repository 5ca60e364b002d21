#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "soficperm/errors.hpp"
#include "soficperm/freeness.hpp"
#include "soficperm/group.hpp"
#include "soficperm/moment.hpp"
#include "soficperm/partition.hpp"
#include "soficperm/perm.hpp"
#include "soficperm/quasi_action.hpp"
#include "soficperm/rational.hpp"
#include "soficperm/tile.hpp"

namespace soficperm {

using nlohmann::json;

/// Reads a whole file as JSON. Throws InputError on I/O or parse failure.
json load_json_file(const std::string& path);

/// Wraps nlohmann lookups so that missing or mistyped fields become InputError.
template <class T>
T json_get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T json_get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return json_get<T>(j, key);
}

json permutation_to_json(const Permutation& p);
Permutation permutation_from_json(const json& j);

json matrix_to_json(const SubPermMatrix& m);
/// {"degree", "entries": [[row, col], ...]}, {"permutation": [...]}, or
/// "identity"; `degree` is used when the object omits it.
SubPermMatrix matrix_from_json(const json& j, std::size_t degree);

json moment_spec_to_json(const MomentSpec& s);
MomentSpec moment_spec_from_json(const json& j);

json partition_to_json(const Partition& p);
Partition partition_from_json(const json& j);

/// {"group", "degree", "table": [{"element", "permutation"}]}.
json quasi_action_to_json(const QuasiAction& qa);
QuasiAction quasi_action_from_json(const json& j);

/// A quasi-action of `group` described by type: "table" (as above, minus
/// the group), "regular", "truncated_shift" {n, radius, wrap}, or
/// "generators" {images, domain_radius}.
QuasiAction quasi_action_from_config(const GroupPtr& group, const json& j);

/// {"type": "cycle_powers" | "half_shift" | "integer_shifts" |
/// "free_group_images" | "transpositions" | "table", ...}.
DeterministicFamily family_from_json(const json& j);

/// {"words": ["x1 x2", ...], "blocks": [j1, ...]}.
MixedMomentSpec mixed_spec_from_json(const json& j);

/// Array of words or normal forms.
std::vector<Element> elements_from_json(const Group& G, const json& j);

/// {"type": "interval" {L} | "lattice_box" {rank, L} | "whole_group" |
/// "explicit" {tile, centers} | "periodic" {tile, period}}.
Tile tile_from_json(const GroupPtr& G, const json& j);

json defect_to_json(const DefectReport& d);

/// "p/q" (or "p" for integers).
std::string rational_cell(const Rational& q);
/// Shortest round-trip decimal.
std::string double_cell(double x);

}  // namespace soficperm
