#include "soficperm/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "soficperm/errors.hpp"

namespace soficperm {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

json permutation_to_json(const Permutation& p) {
  return json(std::vector<std::uint32_t>(p.image().begin(), p.image().end()));
}

Permutation permutation_from_json(const json& j) {
  if (!j.is_array()) throw InputError("a permutation is a JSON array of images");
  try {
    return Permutation(j.get<std::vector<std::uint32_t>>());
  } catch (const json::exception& e) {
    throw InputError(std::string("permutation: ") + e.what());
  }
}

json matrix_to_json(const SubPermMatrix& m) {
  json entries = json::array();
  for (auto [r, c] : m.entries()) entries.push_back({r, c});
  return {{"degree", m.degree()}, {"entries", entries}};
}

SubPermMatrix matrix_from_json(const json& j, std::size_t degree) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return SubPermMatrix::identity(degree);
    throw InputError("unknown matrix shorthand " + j.dump());
  }
  if (j.is_array()) return SubPermMatrix::from_permutation(permutation_from_json(j));
  const std::size_t d = json_get_or<std::size_t>(j, "degree", degree);
  SubPermMatrix m;
  if (j.contains("permutation")) {
    m = SubPermMatrix::from_permutation(permutation_from_json(j.at("permutation")));
  } else {
    const auto pairs = json_get<std::vector<std::pair<std::uint32_t, std::uint32_t>>>(j, "entries");
    m = SubPermMatrix::from_entries(d, pairs);
  }
  if (m.degree() != d) throw InputError("matrix degree " + std::to_string(m.degree()) + " differs from " + std::to_string(d));
  return m;
}

json moment_spec_to_json(const MomentSpec& s) {
  json mats = json::array();
  for (const auto& m : s.matrices) mats.push_back(matrix_to_json(m));
  return {{"degree", s.degree}, {"matrices", mats}};
}

MomentSpec moment_spec_from_json(const json& j) {
  MomentSpec s;
  s.degree = json_get<std::size_t>(j, "degree");
  const auto mats = json_get<json>(j, "matrices");
  if (!mats.is_array()) throw InputError("'matrices' must be an array");
  for (const auto& m : mats) s.matrices.push_back(matrix_from_json(m, s.degree));
  s.validate();
  return s;
}

json partition_to_json(const Partition& p) { return json(std::vector<int>(p.rgs().begin(), p.rgs().end())); }

Partition partition_from_json(const json& j) {
  try {
    return Partition::from_rgs(j.get<std::vector<int>>());
  } catch (const json::exception& e) {
    throw InputError(std::string("partition: ") + e.what());
  }
}

json quasi_action_to_json(const QuasiAction& qa) {
  json table = json::array();
  for (const auto& [g, p] : qa.table()) table.push_back({{"element", g}, {"permutation", permutation_to_json(p)}});
  return {{"group", qa.group().descriptor()}, {"degree", qa.degree()}, {"table", table}};
}

namespace {

QuasiAction table_action(const GroupPtr& G, const json& j) {
  const auto degree = json_get<std::size_t>(j, "degree");
  std::map<Element, Permutation> table;
  for (const auto& row : json_get<json>(j, "table")) {
    Element g = element_from_json(*G, json_get<json>(row, "element"));
    if (!table.emplace(g, permutation_from_json(json_get<json>(row, "permutation"))).second)
      throw InputError("element " + format_element(g) + " appears twice in the table");
  }
  return QuasiAction(G, degree, std::move(table));
}

}  // namespace

QuasiAction quasi_action_from_json(const json& j) { return table_action(make_group(json_get<json>(j, "group")), j); }

QuasiAction quasi_action_from_config(const GroupPtr& G, const json& j) {
  const auto type = json_get<std::string>(j, "type");
  if (type == "table") return table_action(G, j);
  if (type == "regular") return QuasiAction::regular(G);
  if (type == "truncated_shift") {
    if (G->descriptor() != json{{"type", "integers"}}) throw InputError("truncated_shift acts by the integers");
    const auto wrap = json_get_or<std::string>(j, "wrap", "reflect");
    if (wrap != "reflect" && wrap != "cyclic") throw InputError("wrap must be 'reflect' or 'cyclic'");
    return QuasiAction::truncated_shift(json_get<std::size_t>(j, "n"), json_get<std::size_t>(j, "radius"),
                                        wrap == "cyclic" ? QuasiAction::Wrap::cyclic : QuasiAction::Wrap::reflect);
  }
  if (type == "generators") {
    std::vector<Permutation> images;
    for (const auto& p : json_get<json>(j, "images")) images.push_back(permutation_from_json(p));
    const auto domain = G->ball(json_get<std::size_t>(j, "domain_radius"));
    return QuasiAction::from_generator_images(G, std::move(images), domain);
  }
  throw InputError("unknown action type '" + type + "'");
}

DeterministicFamily family_from_json(const json& j) {
  const auto type = json_get<std::string>(j, "type");
  if (type == "cycle_powers") return DeterministicFamily::cycle_powers(json_get<std::vector<std::int64_t>>(j, "indices"));
  if (type == "half_shift") return DeterministicFamily::half_shift();
  if (type == "integer_shifts")
    return DeterministicFamily::integer_shifts(json_get<std::vector<std::int64_t>>(j, "indices"));
  if (type == "free_group_images")
    return DeterministicFamily::free_group_images(json_get<std::uint64_t>(j, "seed"), json_get<std::size_t>(j, "radius"));
  if (type == "transpositions") return DeterministicFamily::transpositions(json_get<std::size_t>(j, "count"));
  if (type == "table") {
    std::map<std::int64_t, std::map<std::size_t, Permutation>> table;
    for (const auto& row : json_get<json>(j, "entries")) {
      auto p = permutation_from_json(json_get<json>(row, "permutation"));
      const auto d = p.degree();
      table[json_get<std::int64_t>(row, "index")].insert_or_assign(d, std::move(p));
    }
    return DeterministicFamily::from_table(std::move(table));
  }
  throw InputError("unknown family type '" + type + "'");
}

MixedMomentSpec mixed_spec_from_json(const json& j) {
  MixedMomentSpec s;
  for (const auto& w : json_get<std::vector<std::string>>(j, "words")) s.words.push_back(FreeWord::parse(w));
  for (const auto& b : json_get_or<json>(j, "blocks", json::array())) {
    if (b.is_number_integer()) {
      s.blocks.push_back(Element{b.get<std::int64_t>()});
    } else {
      try {
        s.blocks.push_back(b.get<Element>());
      } catch (const json::exception& e) {
        throw InputError(std::string("block index: ") + e.what());
      }
    }
  }
  s.validate();
  return s;
}

std::vector<Element> elements_from_json(const Group& G, const json& j) {
  if (!j.is_array()) throw InputError("expected a list of group elements");
  std::vector<Element> out;
  for (const auto& e : j) out.push_back(element_from_json(G, e));
  return out;
}

Tile tile_from_json(const GroupPtr& G, const json& j) {
  const auto type = json_get<std::string>(j, "type");
  Tile t;
  if (type == "interval" || type == "lattice_box") {
    const auto rank = type == "interval" ? 1 : json_get<std::size_t>(j, "rank");
    const auto* lattice = dynamic_cast<const IntegerLattice*>(G.get());
    if (!lattice || lattice->rank() != rank) throw InputError(type + " tiles live in Z^" + std::to_string(rank));
    t = Tile::lattice_box(rank, json_get<std::size_t>(j, "L"));
    t.group = G;
  } else if (type == "whole_group") {
    t = Tile::whole_group(G);
  } else if (type == "explicit") {
    t = Tile::explicit_centers(G, elements_from_json(*G, json_get<json>(j, "tile")),
                               elements_from_json(*G, json_get<json>(j, "centers")));
  } else if (type == "periodic") {
    t = Tile::periodic(G, elements_from_json(*G, json_get<json>(j, "tile")), json_get<std::size_t>(j, "period"));
  } else {
    throw InputError("unknown tile type '" + type + "'");
  }
  return t;
}

json defect_to_json(const DefectReport& d) {
  return {{"multiplicativity_defect", rational_cell(d.multiplicativity_defect)},
          {"freeness_defect", rational_cell(d.freeness_defect)}};
}

std::string rational_cell(const Rational& q) { return to_string(q); }

std::string double_cell(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace soficperm
