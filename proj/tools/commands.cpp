#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "soficperm/amalgam.hpp"
#include "soficperm/errors.hpp"
#include "soficperm/freeness.hpp"
#include "soficperm/json_io.hpp"
#include "soficperm/moment.hpp"
#include "soficperm/partition.hpp"
#include "soficperm/quasi_action.hpp"
#include "soficperm/rng.hpp"
#include "soficperm/tile.hpp"

namespace soficperm::cli {
namespace {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary;  // null when absent
};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json obj = json::object();
      for (std::size_t k = 0; k < t.columns.size(); ++k) obj[t.columns[k]] = r[k];
      rows.push_back(std::move(obj));
    }
    json doc = {{"rows", rows}};
    if (!t.summary.is_null()) doc["summary"] = t.summary;
    out << doc.dump(2) << '\n';
    return;
  }
  for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? "," : "") << csv_cell(r[k]);
    out << '\n';
  }
  if (!t.summary.is_null()) out << "# summary " << t.summary.dump() << '\n';
}

json load_config(const RunConfig& cfg, bool required = true) {
  if (cfg.config_path.empty()) {
    if (required) throw InputError(cfg.command + " needs --config");
    return json::object();
  }
  return load_json_file(cfg.config_path);
}

std::uint64_t require_seed(const RunConfig& cfg, const json& conf) {
  if (cfg.seed) return *cfg.seed;
  if (conf.is_object() && conf.contains("seed")) return json_get<std::uint64_t>(conf, "seed");
  throw InputError(cfg.command + " is stochastic and needs --seed (or a 'seed' field)");
}

std::size_t samples_of(const RunConfig& cfg, const json& conf, std::size_t fallback) {
  const std::size_t s = cfg.samples ? *cfg.samples : json_get_or<std::size_t>(conf, "samples", fallback);
  if (s == 0) throw InputError("samples must be >= 1");
  return s;
}

EngineConfig engine(const RunConfig& cfg) {
  EngineConfig e;
  if (cfg.budget) e.budget = cfg.budget;
  e.workers = cfg.workers;
  return e;
}

json rat(const Rational& q) { return rational_cell(q); }
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ------------------------------------------------------------ moments

const std::vector<std::string> kMomentColumns = {"d",          "n",           "exact",  "mc_mean", "mc_stderr",
                                                 "paper_bound", "cn_dn_bound", "f_of_d", "oracle",  "seed"};

std::vector<MomentSpec> specs_from_config(const json& conf) {
  std::vector<MomentSpec> out;
  if (conf.contains("specs")) {
    for (const auto& s : json_get<json>(conf, "specs")) out.push_back(moment_spec_from_json(s));
  } else if (conf.contains("generate")) {
    // Shift matrices B_j = (k -> k + j): every B_j has trace 0 once d > 2n.
    const auto gen = json_get<json>(conf, "generate");
    const auto kind = json_get<std::string>(gen, "kind");
    if (kind != "shifts") throw InputError("unknown generator '" + kind + "'");
    const auto n = json_get<std::size_t>(gen, "half_length");
    for (auto d : json_get<std::vector<std::size_t>>(gen, "degrees")) {
      MomentSpec s{d, {}};
      for (std::size_t j = 1; j <= 2 * n; ++j)
        s.matrices.push_back(SubPermMatrix::from_permutation(Permutation::shift(d, static_cast<std::int64_t>(j))));
      s.validate();
      out.push_back(std::move(s));
    }
  } else {
    out.push_back(moment_spec_from_json(conf));
  }
  if (out.empty()) throw InputError("no moment specs in config");
  return out;
}

bool bound_applicable(const MomentSpec& s) {
  return s.degree >= 4 * s.half_length() && 2 * s.half_length() <= 8;
}

int cmd_exact_moment(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const auto ecfg = engine(cfg);
  Table t{kMomentColumns, {}, nullptr};
  bool ok = true;
  for (const auto& s : specs_from_config(conf)) {
    const Rational exact = exact_moment(s, ecfg);
    std::vector<json> row = {s.degree, s.half_length(), rat(exact), nullptr, nullptr,
                             nullptr,  nullptr,         rat(max_normalized_trace(s.matrices)), nullptr, nullptr};
    if (bound_applicable(s)) {
      auto b = paper_bound(s, ecfg, false);
      b.exact = exact;
      row[5] = rat(b.paper_bound);
      row[6] = rat(b.cn_dn_bound);
      ok = ok && b.ordered();
    }
    if (s.degree <= kBruteForceMaxDegree) {
      const Rational oracle = brute_force_moment(s);
      row[8] = rat(oracle);
      ok = ok && oracle == exact;
    }
    t.rows.push_back(std::move(row));
  }
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

std::optional<Rational> exact_if_affordable(const MomentSpec& s, const EngineConfig& e) {
  try {
    return exact_moment(s, e);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

int cmd_mc_moment(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const auto seed = require_seed(cfg, conf);
  const auto samples = samples_of(cfg, conf, 2000);
  const auto ecfg = engine(cfg);
  Table t{kMomentColumns, {}, nullptr};
  bool ok = true;
  const auto specs = specs_from_config(conf);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& s = specs[k];
    const std::uint64_t key = derive_seed(seed, {k});
    const auto est = mc_moment(s, samples, key, cfg.workers);
    const auto exact = exact_if_affordable(s, ecfg);
    std::vector<json> row = {s.degree, s.half_length(), exact ? rat(*exact) : json(nullptr), num(est.mean),
                             num(est.std_error), nullptr, nullptr, rat(max_normalized_trace(s.matrices)), nullptr,
                             std::to_string(key)};
    if (bound_applicable(s)) {
      const auto b = paper_bound(s, ecfg, false);
      row[5] = rat(b.paper_bound);
      row[6] = rat(b.cn_dn_bound);
    }
    if (exact) ok = ok && std::abs(est.mean - to_double(*exact)) <= 4 * est.std_error + 1e-12;
    t.rows.push_back(std::move(row));
  }
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

int cmd_bound_check(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const auto ecfg = engine(cfg);
  Table t{kMomentColumns, {}, nullptr};
  bool ok = true;
  for (const auto& s : specs_from_config(conf)) {
    if (!bound_applicable(s))
      throw InputError("bound-check needs d >= 4n and 2n <= 8 (d=" + std::to_string(s.degree) +
                       ", n=" + std::to_string(s.half_length()) + ")");
    auto b = paper_bound(s, ecfg, false);
    b.exact = exact_if_affordable(s, ecfg);
    ok = ok && b.ordered();
    if (b.f_of_d == 0) ok = ok && b.paper_bound < 10 * Rational(b.cn) / static_cast<unsigned long>(b.d);
    t.rows.push_back({b.d, b.n, b.exact ? rat(*b.exact) : json(nullptr), nullptr, nullptr, rat(b.paper_bound),
                      rat(b.cn_dn_bound), rat(b.f_of_d), nullptr, nullptr});
  }
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

// ------------------------------------------------------------ partitions

int cmd_partition_lemmas(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg, false);
  const auto sizes = json_get_or<std::vector<std::size_t>>(conf, "sizes", {2, 4, 6, 8});
  Table t{{"two_n", "partitions", "bell", "rs1_failures", "rnopair_cases", "rs0_failures", "lemma22_cases",
           "lemma22_failures"},
          {},
          nullptr};
  bool ok = true;
  for (auto m : sizes) {
    if (m == 0 || m % 2 != 0) throw InputError("sizes must be even and positive");
    const auto scan = scan_partition_lemmas(m);
    const Integer bell = bell_number(m);
    ok = ok && scan.ok() && Integer(std::to_string(scan.partitions)) == bell;
    t.rows.push_back({m, scan.partitions, to_string(bell), scan.rs1_failures, scan.rnopair_cases, scan.rs0_failures,
                      scan.lemma22_cases, scan.lemma22_failures});
  }
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

// ------------------------------------------------------------ sofic primitives

QuasiAction action_from_entry(const GroupPtr& G, const json& j) {
  return j.contains("table") ? quasi_action_from_config(G, {{"type", "table"}, {"degree", j.at("degree")}, {"table", j.at("table")}})
                             : quasi_action_from_config(G, j);
}

int cmd_sofic_check(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const GroupPtr G = make_group(json_get<json>(conf, "group"));

  if (conf.contains("witness")) {
    const auto w = json_get<json>(conf, "witness");
    std::vector<QuasiAction> seq;
    for (const auto& a : json_get<json>(w, "actions")) seq.push_back(action_from_entry(G, a));
    const auto targets = elements_from_json(*G, json_get<json>(w, "targets"));
    const auto wit = assemble_witness(seq, targets);
    Table t{{"degree", "multiplicativity_defect", "freeness_defect"}, {}, nullptr};
    for (const auto& g : targets) t.columns.push_back("dist_" + format_element(g));
    for (const auto& s : wit.steps) {
      std::vector<json> row = {s.degree, rat(s.defect.multiplicativity_defect), rat(s.defect.freeness_defect)};
      for (const auto& d : s.dist_to_identity) row.push_back(rat(d));
      t.rows.push_back(std::move(row));
    }
    t.summary = {{"trend_ok", wit.trend_ok}};
    emit(t, cfg.format, out);
    return wit.trend_ok ? kPass : kAcceptanceFail;
  }

  const QuasiAction qa = action_from_entry(G, conf.contains("action") ? conf.at("action") : conf);
  std::vector<Element> F;
  if (conf.contains("F"))
    F = elements_from_json(*G, conf.at("F"));
  else if (conf.contains("radius"))
    F = G->ball(json_get<std::size_t>(conf, "radius"));
  else
    F = qa.domain();
  const auto rep = measure_defect(qa, F, cfg.workers);
  Table t{{"element", "dist_to_identity"}, {}, nullptr};
  const auto id = Permutation::identity(qa.degree());
  for (const auto& g : F) t.rows.push_back({format_element(g), rat(normalized_hamming(qa.at(g), id))});
  t.summary = defect_to_json(rep);
  t.summary["degree"] = qa.degree();
  t.summary["F_size"] = F.size();
  bool ok = true;
  if (conf.contains("max_defect")) {
    const double limit = json_get<double>(conf, "max_defect");
    ok = to_double(rep.worst()) <= limit;
    t.summary["max_defect"] = limit;
  }
  t.summary["pass"] = ok;
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

int cmd_tile_check(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const GroupPtr G = make_group(json_get<json>(conf, "group"));
  const Tile tile = tile_from_json(G, json_get<json>(conf, "tile"));
  const auto window = json_get_or<std::size_t>(conf, "window", 8);
  const bool verified = verify_tile(tile, window);
  Table t{{"tile_size", "window", "verified", "eps", "folner_size", "centers", "defect"}, {}, nullptr};
  std::vector<json> row = {tile.tile.size(), window, verified, nullptr, nullptr, nullptr, nullptr};
  bool ok = verified;
  if (conf.contains("eps")) {
    const double eps = json_get<double>(conf, "eps");
    const auto K = elements_from_json(*G, json_get<json>(conf, "K"));
    const auto F = tiled_folner(tile, K, eps);
    row[3] = num(eps);
    row[4] = F.set.size();
    row[5] = F.centers.size();
    row[6] = rat(F.defect);
    ok = ok && to_double(F.defect) < eps;
  }
  t.rows.push_back(std::move(row));
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

// ------------------------------------------------------------ amalgam

struct FactorSetup {
  GroupPtr group;
  std::shared_ptr<const TileAlignedQA> aligned;  // before amplification
  std::size_t amplify = 1;
};

FactorSetup setup_factor(const json& fj, const GroupPtr& H, const Tile& tile, const std::vector<Element>& K,
                         std::size_t defect_radius) {
  FactorSetup f;
  f.group = make_group(json_get<json>(fj, "group"));
  EmbeddingPtr emb;
  const json ej = json_get_or<json>(fj, "embedding", json::array());
  if (ej.is_string() && ej.get<std::string>() == "identity") {
    if (H->descriptor() != f.group->descriptor()) throw InputError("identity embedding needs H equal to the factor");
    emb = std::make_shared<SubgroupEmbedding>(SubgroupEmbedding::identity(f.group));
  } else {
    emb = std::make_shared<SubgroupEmbedding>(H, f.group, elements_from_json(*f.group, ej));
  }
  const QuasiAction qa = action_from_entry(f.group, json_get<json>(fj, "action"));
  const auto F = f.group->ball(defect_radius);
  f.aligned = std::make_shared<TileAlignedQA>(align_to_tile(qa, emb, tile, K, F));
  f.amplify = json_get_or<std::size_t>(fj, "amplify", 1);
  if (f.amplify == 0) throw InputError("amplify must be positive");
  return f;
}

json alignment_json(const TileAlignedQA& aq) {
  const auto& r = aq.report;
  return {{"tile_size", aq.tile_size()},
          {"aux_size", aq.aux_size},
          {"source_defect", rat(r.source_defect)},
          {"uncovered", rat(r.uncovered)},
          {"tiling_penalty", rat(r.tiling_penalty)},
          {"budget", rat(r.budget)},
          {"measured", defect_to_json(r.measured)},
          {"block_trace_ceiling", rat(block_trace_ceiling(aq))}};
}

// First element of the factor outside H: the letter used for vanishing words.
Element first_outside(const TileAlignedQA& aq) {
  const auto& G = aq.action.group();
  for (const auto& g : aq.action.domain())
    if (!aq.embedding->contains(g) && G.word_length(g, 8).value_or(99) == 1) return g;
  for (const auto& g : aq.action.domain())
    if (!aq.embedding->contains(g)) return g;
  throw InputError("factor " + G.name() + " has no element outside H in its domain");
}

int cmd_amalgam(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const json conf = load_config(cfg);
  const auto seed = require_seed(cfg, conf);
  const GroupPtr H = make_group(json_get<json>(conf, "subgroup"));
  const Tile tile = tile_from_json(H, json_get_or<json>(conf, "tile", json{{"type", "whole_group"}}));
  const auto K = H->ball(json_get_or<std::size_t>(conf, "K_radius", 1));
  const auto defect_radius = json_get_or<std::size_t>(conf, "defect_radius", 1);
  const auto factors_json = json_get<json>(conf, "factors");
  if (!factors_json.is_array() || factors_json.size() != 2) throw InputError("'factors' must list two factors");

  FactorSetup f1 = setup_factor(factors_json[0], H, tile, K, defect_radius);
  FactorSetup f2 = setup_factor(factors_json[1], H, tile, K, defect_radius);
  auto aq1 = std::make_shared<const TileAlignedQA>(amplify(*f1.aligned, f1.amplify));
  auto aq2 = std::make_shared<const TileAlignedQA>(amplify(*f2.aligned, f2.amplify));

  const Amalgam amalgam(aq1->embedding, aq2->embedding);
  const auto seeds = json_get_or<std::size_t>(conf, "seeds", 20);
  std::vector<AmalgamQA> per_seed;
  for (std::size_t s = 0; s < seeds; ++s) per_seed.push_back(build_amalgam(aq1, aq2, derive_seed(seed, {s})));

  std::vector<AmalgamWord> words;
  const json wj = json_get_or<json>(conf, "words", json{{"max_syllables", 4}});
  if (wj.is_array()) {
    for (const auto& w : wj) words.push_back(amalgam.parse(w.get<std::string>()));
  } else {
    words = amalgam.reduced_words_up_to(json_get<std::size_t>(wj, "max_syllables"));
  }

  Table t{{"word", "case", "core", "aux_size", "seed", "dist", "direct_dist"}, {}, json::object()};
  const double min_mean = json_get_or<double>(conf, "min_mean_dist", 0.9);
  double worst_mean = 1;
  json word_summary = json::array();
  for (const auto& w : words) {
    const auto wd = check_word_distance(amalgam, per_seed, w);
    for (std::size_t k = 0; k < wd.seeds.size(); ++k)
      t.rows.push_back({amalgam.format(wd.reduced), to_string(wd.word_case), amalgam.format(wd.route.core),
                        aq1->aux_size, std::to_string(wd.seeds[k]), rat(wd.dist[k]), rat(wd.direct_dist[k])});
    worst_mean = std::min(worst_mean, wd.mean_dist);
    word_summary.push_back({{"word", amalgam.format(wd.reduced)}, {"case", to_string(wd.word_case)},
                            {"mean_dist", num(wd.mean_dist)}});
  }
  bool ok = worst_mean >= min_mean;

  json vanishing = json::array();
  const json vj = json_get_or<json>(conf, "vanishing", json::object());
  const auto max_half = json_get_or<std::size_t>(vj, "max_half_length", 2);
  const auto v_samples = json_get_or<std::size_t>(vj, "samples", 200);
  const Element a = first_outside(*aq1), b = first_outside(*aq2);
  for (std::size_t n = 1; n <= max_half; ++n) {
    AlternatingWord aw;
    for (std::size_t k = 0; k < n; ++k) aw.elements.insert(aw.elements.end(), {a, b});
    const auto key = derive_seed(seed, {1'000'000, n});
    const auto rep = certify_vanishing(*aq1, *aq2, aw, v_samples, key, cfg.workers);
    ok = ok && rep.within_ceiling();
    vanishing.push_back({{"n", n},
                         {"aux_size", aq1->aux_size},
                         {"estimate", num(rep.estimate.mean)},
                         {"std_error", num(rep.estimate.std_error)},
                         {"ceiling", rat(rep.ceiling)},
                         {"block_ceiling", rat(rep.block_ceiling)},
                         {"ceiling_applies", rep.ceiling_applies},
                         {"within_ceiling", rep.within_ceiling()},
                         {"seed", std::to_string(key)}});
  }

  json oracle = json::array();
  if (conf.contains("oracle")) {
    const json oj = conf.at("oracle");
    const auto factor = json_get<std::size_t>(oj, "amplify");
    const TileAlignedQA o1 = amplify(*f1.aligned, factor), o2 = amplify(*f2.aligned, factor);
    const auto o_samples = json_get_or<std::size_t>(oj, "samples", 400);
    for (std::size_t n = 1; n <= json_get_or<std::size_t>(oj, "max_half_length", 2); ++n) {
      AlternatingWord aw;
      for (std::size_t k = 0; k < n; ++k) aw.elements.insert(aw.elements.end(), {a, b});
      const Rational derandomized = derandomized_trace(o1, o2, aw);
      const auto key = derive_seed(seed, {2'000'000, n});
      const auto rep = certify_vanishing(o1, o2, aw, o_samples, key, cfg.workers, true, engine(cfg));
      const bool routes_agree = rep.exact && *rep.exact == derandomized;
      const bool mc_agrees =
          std::abs(rep.estimate.mean - to_double(derandomized)) <= 4 * rep.estimate.std_error + 1e-12;
      ok = ok && routes_agree && mc_agrees;
      oracle.push_back({{"n", n},
                        {"aux_size", o1.aux_size},
                        {"derandomized", rat(derandomized)},
                        {"block_sum", rep.exact ? rat(*rep.exact) : json(nullptr)},
                        {"estimate", num(rep.estimate.mean)},
                        {"std_error", num(rep.estimate.std_error)},
                        {"agree", routes_agree && mc_agrees},
                        {"seed", std::to_string(key)}});
    }
  }

  t.summary = {{"factors", {alignment_json(*aq1), alignment_json(*aq2)}},
               {"seeds", seeds},
               {"words", word_summary},
               {"min_mean_dist", num(worst_mean)},
               {"required_mean_dist", num(min_mean)},
               {"vanishing", vanishing},
               {"oracle", oracle},
               {"pass", ok}};
  emit(t, cfg.format, out);
  if (!cfg.out_path.empty()) {
    std::ofstream sf(cfg.out_path + ".summary.json");
    if (!sf) err << "warning: cannot write " << cfg.out_path << ".summary.json\n";
    sf << t.summary.dump(2) << '\n';
  }
  return ok ? kPass : kAcceptanceFail;
}

// ------------------------------------------------------------ freeness

void trajectory_rows(Table& t, const std::string& label, const DecayTrajectory& traj) {
  for (const auto& p : traj)
    t.rows.push_back({label, p.d, num(p.estimate.mean), num(p.estimate.std_error), std::to_string(p.estimate.seed),
                      nullptr});
}

int cmd_freeness_sweep(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const auto seed = require_seed(cfg, conf);
  const auto samples = samples_of(cfg, conf, 2000);
  const auto degrees = json_get<std::vector<std::size_t>>(conf, "degrees");
  const double threshold = json_get_or<double>(conf, "threshold", 0.05);
  Table t{{"estimator", "d", "estimate", "std_error", "seed", "bound"}, {}, json::object()};

  bool ok = true;
  if (conf.contains("word")) {
    const auto w = FreeWord::parse(json_get<std::string>(conf, "word"));
    const auto traj = nica_decay(w, degrees, samples, seed, cfg.workers);
    trajectory_rows(t, "word", traj);
    const auto v = assess_decay(traj, threshold);
    ok = v.pass();
    t.summary = {{"kind", "word"}, {"word", w.reduced().to_string()}, {"monotone", v.monotone},
                 {"final_small", v.final_small}};
  } else {
    const auto spec = mixed_spec_from_json(json_get<json>(conf, "mixed"));
    const auto fam = family_from_json(json_get<json>(conf, "family"));
    const auto form = cyclic_reduce_mixed(spec, fam);
    const auto traj = mixed_decay(spec, fam, degrees, samples, seed, cfg.workers);
    trajectory_rows(t, "mixed", traj);
    const auto v = assess_decay(traj, threshold);
    ok = v.pass();
    t.summary = {{"kind", "mixed"}, {"form", to_string(form.form)}, {"approximations", form.approximations},
                 {"monotone", v.monotone}, {"final_small", v.final_small}};
    if (json_get_or<bool>(conf, "conjugated", true)) {
      const auto conj = mixed_decay_conjugated(form, fam, degrees, samples, seed, cfg.workers);
      trajectory_rows(t, "conjugated", conj);
      json agree = json::array();
      for (std::size_t k = 0; k < traj.size(); ++k) {
        const bool a = agree_within(traj[k].estimate, conj[k].estimate, 4);
        agree.push_back(a);
        ok = ok && a;
      }
      t.summary["agree"] = agree;
    }
  }
  t.summary["threshold"] = threshold;
  t.summary["samples"] = samples;
  t.summary["pass"] = ok;
  emit(t, cfg.format, out);
  return ok ? kPass : kAcceptanceFail;
}

int cmd_family_check(const RunConfig& cfg, std::ostream& out) {
  const json conf = load_config(cfg);
  const auto fam = family_from_json(json_get<json>(conf, "family"));
  const auto degrees = json_get<std::vector<std::size_t>>(conf, "degrees");
  const auto rep = verify_family(fam, degrees);
  Table t{{"kind", "j1", "j2", "d", "value", "rule", "exact_match"}, {}, nullptr};
  for (const auto& tt : rep.traces)
    for (std::size_t k = 0; k < degrees.size(); ++k)
      t.rows.push_back({"trace", format_element(tt.index), nullptr, degrees[k], rat(tt.traces[k]), nullptr, nullptr});
  for (const auto& p : rep.pairs) {
    const char* rule = p.declared.kind == ProductRule::Kind::exact           ? "exact"
                       : p.declared.kind == ProductRule::Kind::near_identity ? "near_identity"
                                                                              : "none";
    for (std::size_t k = 0; k < degrees.size(); ++k)
      t.rows.push_back({"pair", format_element(p.first), format_element(p.second), degrees[k],
                        rat(p.dist_to_identity[k]), rule,
                        p.exact_match.empty() ? json(nullptr) : json(static_cast<bool>(p.exact_match[k]))});
  }
  t.summary = {{"family", fam.name()}, {"traces_ok", rep.traces_ok}, {"closure_ok", rep.closure_ok}};
  emit(t, cfg.format, out);
  return rep.traces_ok && rep.closure_ok ? kPass : kAcceptanceFail;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"exact-moment", "mc-moment",  "bound-check",
                                                 "partition-lemmas", "sofic-check", "tile-check",
                                                 "amalgam",      "freeness-sweep", "family-check"};
  return names;
}

std::uint64_t budget_from_env() {
  const char* v = std::getenv("SOFICPERM_BUDGET");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const auto b = std::strtoull(v, &end, 10);
  return (end && *end == '\0') ? b : 0;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.format != "csv" && cfg.format != "json") throw InputError("--format must be csv or json");
    if (cfg.workers == 0) throw InputError("--workers must be >= 1");
    if (cfg.command == "exact-moment") return cmd_exact_moment(cfg, out);
    if (cfg.command == "mc-moment") return cmd_mc_moment(cfg, out);
    if (cfg.command == "bound-check") return cmd_bound_check(cfg, out);
    if (cfg.command == "partition-lemmas") return cmd_partition_lemmas(cfg, out);
    if (cfg.command == "sofic-check") return cmd_sofic_check(cfg, out);
    if (cfg.command == "tile-check") return cmd_tile_check(cfg, out);
    if (cfg.command == "amalgam") return cmd_amalgam(cfg, out, err);
    if (cfg.command == "freeness-sweep") return cmd_freeness_sweep(cfg, out);
    if (cfg.command == "family-check") return cmd_family_check(cfg, out);
    throw InputError("unknown command '" + cfg.command + "'");
  } catch (const AlignmentError& e) {
    err << "alignment error: " << e.what() << '\n';
    return kAlignment;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const Error& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  }
}

int run(const RunConfig& cfg, std::ostream& err) {
  if (cfg.out_path.empty()) return run_command(cfg, std::cout, err);
  std::ostringstream buf;
  const int code = run_command(cfg, buf, err);
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) {
    err << "input error: cannot write '" << cfg.out_path << "'\n";
    return kInputError;
  }
  f << buf.str();
  return code;
}

}  // namespace soficperm::cli
