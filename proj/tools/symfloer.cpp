// Command-line front end. Exit codes: 0 success or PASS, 1 FAIL verdict,
// 2 usage or computation error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "symfloer/capped_orbits.hpp"
#include "symfloer/errors.hpp"
#include "symfloer/flow.hpp"
#include "symfloer/orbifold.hpp"
#include "symfloer/potential.hpp"
#include "symfloer/quantum_algebra.hpp"
#include "symfloer/quasimorphism.hpp"

using namespace symfloer;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    std::vector<std::size_t> width(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
    for (const auto& r : rows)
      for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) s += "  ";
        s += cells[c];
        if (c + 1 < cells.size()) s += std::string(width[c] - cells[c].size(), ' ');
      }
      out << s << "\n";
    };
    line(headers);
    for (const auto& r : rows) line(r);
  }
};

// Either a table with trailing summary lines or a JSON document.
struct Report {
  Table table;
  std::vector<std::string> summary;
  json doc;
  int code = kExitPass;
};

struct Globals {
  bool as_json = false;
  std::string trunc;
  std::uint64_t seed = 1;
};

std::string str(const Rational& r) { return to_string(r); }
std::string str(const ExtRational& r) { return r.is_infinite() ? "inf" : to_string(r.value()); }
std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

std::optional<Rational> optional_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return parse_rational_at(text, 0);
}

// ---------------------------------------------------------------------------

Report run_sectors(long k, long dim) {
  if (k < 1) throw ConfigError("k must be at least 1");
  Report r;
  r.table.headers = {"partition", "cycles", "age", "centralizer", "rank", "degrees"};
  json sectors = json::array();
  for (const auto& p : orbifold::conjugacy_classes(k)) {
    orbifold::Sector s = orbifold::sector(p, dim);
    json row{{"partition", p.parts}, {"cycles", s.cycles}, {"age", str(s.age)},
             {"centralizer_order", s.centralizer_order.get_str()}};
    std::string rank = "-", degrees = "-";
    if (dim == 1) {
      auto betti = orbifold::sector_betti_sym_p1(p);
      Rational lo = 2 * s.age + betti.begin()->first, hi = 2 * s.age + betti.rbegin()->first;
      rank = std::to_string(orbifold::sector_rank_sym_p1(p));
      degrees = str(lo) + ".." + str(hi);
      row["rank"] = orbifold::sector_rank_sym_p1(p);
      row["degree_min"] = str(lo);
      row["degree_max"] = str(hi);
    }
    r.table.rows.push_back({p.str(), std::to_string(s.cycles), str(s.age), s.centralizer_order.get_str(), rank, degrees});
    sectors.push_back(row);
  }
  r.doc = {{"k", k}, {"dim", dim}, {"sectors", sectors}};
  if (dim == 1) {
    auto table = orbifold::cr_betti_table(k);
    json betti = json::object();
    std::string line = "betti:";
    for (const auto& [deg, rank] : table) {
      betti[str(deg)] = rank;
      line += " " + str(deg) + ":" + std::to_string(rank);
    }
    r.doc["betti"] = betti;
    r.doc["total_rank"] = orbifold::total_rank(table);
    r.summary = {line, "total rank: " + std::to_string(orbifold::total_rank(table))};
  }
  return r;
}

Report run_idempotents(long k_max, const Rational& omega, const Globals& g) {
  if (k_max < 1) throw ConfigError("k must be at least 1");
  Report r;
  r.table.headers = {"k", "i", "valuation", "grade", "idempotent"};
  qalg::FiniteCommAlgebra p1 = qalg::qh_p1(omega);
  std::vector<qalg::InvariantSubalgebra> algebras;
  for (long k = 1; k <= k_max; ++k) algebras.push_back(qalg::symmetric_invariant_subalgebra(p1, k));
  qalg::DecompositionOptions options;
  options.precision = optional_rational(g.trunc);
  options.seed = g.seed;
  std::vector<qalg::WeylFamilyMember> family;
  json per_k = json::array();
  for (long k = 1; k <= k_max; ++k) {
    const auto& alg = algebras[k - 1].algebra;
    auto es = qalg::idempotent_decomposition(alg, options);
    json list = json::array();
    for (std::size_t i = 0; i < es.size(); ++i) {
      auto grade = qalg::grade_check(alg, es[i]);
      std::string g_text = grade ? str(*grade) : "inhomogeneous";
      std::string v = str(qalg::valuation(es[i]));
      r.table.rows.push_back({std::to_string(k), std::to_string(i), v, g_text, alg.format(es[i])});
      list.push_back({{"idempotent", alg.format(es[i])}, {"valuation", v}, {"grade", grade ? json(str(*grade)) : json()}});
    }
    per_k.push_back({{"k", k}, {"dimension", alg.dim()}, {"count", es.size()}, {"idempotents", list}});
    family.push_back({k, &alg, es.front()});
  }
  qalg::WeylPredicateReport pred = qalg::weyl_idempotent_predicate(family);
  json entries = json::array();
  for (const auto& e : pred.entries)
    entries.push_back({{"k", e.k}, {"summand_rank", e.summand_rank}, {"valuation", str(e.valuation)},
                       {"ratio", e.ratio ? json(str(*e.ratio)) : json()}});
  r.doc = {{"omega", str(omega)},
           {"families", per_k},
           {"predicate",
            {{"entries", entries},
             {"constant_ratio", pred.constant_ratio ? json(str(*pred.constant_ratio)) : json()},
             {"all_field_summands", pred.all_field_summands},
             {"sublinear", pred.sublinear}}},
           {"verdict", verdict(pred.pass())}};
  r.summary.push_back("constant ratio: " + (pred.constant_ratio ? str(*pred.constant_ratio) : std::string("none")));
  r.summary.push_back("verdict: " + verdict(pred.pass()));
  r.code = pred.pass() ? kExitPass : kExitFail;
  return r;
}

std::vector<std::string> series_strings(const std::vector<NovikovSeries>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

Report run_potential(long k, const std::string& b_text, const std::string& a_text, const std::string& gamma_text,
                     const std::string& target_text, const Globals& g) {
  potential::LinkConfig cfg;
  cfg.k = k;
  cfg.B = parse_rational_at(b_text, 0);
  cfg.gamma = parse_rational_at(gamma_text, 0);
  if (!a_text.empty()) {
    cfg.A = parse_rational_at(a_text, 0);
  } else if (k >= 2) {
    cfg.A = (1 - 2 * cfg.B) / (k - 1);
    cfg.total_area = Rational(1);
  }
  cfg.validate();
  potential::LaurentPoly w = potential::build_s2_potential(cfg);
  auto points = potential::leading_critical_points(w);
  auto positive = std::find_if(points.begin(), points.end(), [](const std::vector<Rational>& p) {
    return std::all_of(p.begin(), p.end(), [](const Rational& x) { return x > 0; });
  });
  std::optional<Rational> target = optional_rational(target_text);
  if (!target) target = optional_rational(g.trunc);
  potential::CriticalPoint cp = potential::newton_lift(w, positive != points.end() ? *positive : points.front(), target);
  potential::HessianDeterminant hd = potential::hessian_det_valuation(cp);
  bool pass = hd.valuation == k * cfg.B;
  Report r;
  r.table.headers = {"field", "value"};
  auto coords = series_strings(cp.coordinates);
  r.table.rows = {{"k", std::to_string(k)},
                  {"B", str(cfg.B)},
                  {"A", str(cfg.A)},
                  {"potential", w.str()},
                  {"critical_point", join(coords, "; ")},
                  {"hess_det", hd.det.str()},
                  {"hess_det_val", str(hd.valuation)},
                  {"Z_leading", hd.z_leading.str()},
                  {"defect_bound", str(hd.valuation)}};
  r.doc = {{"k", k},
           {"B", str(cfg.B)},
           {"A", str(cfg.A)},
           {"critical_point", coords},
           {"hess_det", hd.det.str()},
           {"hess_det_val", str(hd.valuation)},
           {"Z_leading", hd.z_leading.str()},
           {"defect_bound", str(hd.valuation)},
           {"verdict", verdict(pass)}};
  r.summary.push_back("verdict: " + verdict(pass));
  r.code = pass ? kExitPass : kExitFail;
  return r;
}

Report run_weyl(const std::string& rule, long k_min, long k_max, const std::string& gamma_text) {
  auto cert = potential::weyl_certificate(potential::parse_bk_rule(rule), k_min, k_max, parse_rational_at(gamma_text, 0));
  Report r;
  r.table.headers = {"k", "B_k", "A_k", "val detHess", "ratio", "law"};
  json rows = json::array();
  for (const auto& row : cert.rows) {
    json j{{"k", row.k}, {"B", str(row.B)}, {"A", str(row.A)}};
    if (row.config_error) {
      r.table.rows.push_back({std::to_string(row.k), str(row.B), str(row.A), "-", "-", "config error"});
      j["config_error"] = *row.config_error;
    } else {
      r.table.rows.push_back({std::to_string(row.k), str(row.B), str(row.A), str(row.hessian->valuation), str(row.ratio),
                              row.valuation_law ? "yes" : "no"});
      j["hess_det_val"] = str(row.hessian->valuation);
      j["ratio"] = str(row.ratio);
      j["morse"] = row.morse;
      j["valuation_law"] = row.valuation_law;
    }
    rows.push_back(j);
  }
  r.doc = {{"rule", rule}, {"rows", rows}, {"verdict", verdict(cert.pass)}};
  r.summary.push_back("verdict: " + verdict(cert.pass));
  r.code = cert.pass ? kExitPass : kExitFail;
  return r;
}

Report run_flow_verify(const std::string& input, std::size_t size, long depth, const Globals& g) {
  flow::SyntheticFlowCategory cat = input.empty() ? flow::random_consistent_category(g.seed, size, depth)
                                                  : flow::SyntheticFlowCategory::from_json(load_json(input));
  flow::DSquaredReport rep = flow::verify_d_squared(cat, g.seed);
  Report r;
  r.table.headers = {"field", "value"};
  r.table.rows = {{"generators", std::to_string(cat.generators.size())},
                  {"counts", std::to_string(cat.counts.size())},
                  {"max_k", std::to_string(cat.max_k())},
                  {"identity", rep.identity_ok ? "ok" : "violated"},
                  {"matrix", rep.matrix_ok ? "ok" : "violated"}};
  r.doc = {{"generators", cat.generators.size()},
           {"counts", cat.counts.size()},
           {"max_k", cat.max_k()},
           {"identity_ok", rep.identity_ok},
           {"matrix_ok", rep.matrix_ok}};
  if (rep.p) {
    r.doc["violation"] = {{"p", cat.generators[*rep.p].id}, {"q", cat.generators[*rep.q].id}, {"k", *rep.k},
                          {"shift", *rep.shift}};
    r.summary.push_back(rep.str(cat));
  }
  r.doc["verdict"] = verdict(rep.ok);
  r.summary.push_back("verdict: " + verdict(rep.ok));
  r.code = rep.ok ? kExitPass : kExitFail;
  return r;
}

Report run_flow_spectral(const std::string& input, const std::string& cls, const std::string& alpha_text) {
  flow::SyntheticFlowCategory cat = flow::SyntheticFlowCategory::from_json(load_json(input));
  NovikovSeries alpha = alpha_text.empty() ? NovikovSeries(0) : NovikovSeries::parse(alpha_text);
  flow::FilteredComplex c = flow::build_differential(cat, alpha);
  auto x = flow::parse_class(c, cls);
  auto value = flow::spectral_invariant(c, x);
  Report r;
  r.table.headers = {"field", "value"};
  r.table.rows = {{"class", cls}, {"level", c.level_of(x) ? str(*c.level_of(x)) : "none"},
                  {"spectral_invariant", value ? str(*value) : "none"}};
  r.doc = {{"class", cls},
           {"level", c.level_of(x) ? json(str(*c.level_of(x))) : json()},
           {"spectral_invariant", value ? json(str(*value)) : json()}};
  return r;
}

Report run_spec(const std::string& table_path, long k) {
  auto table = ledger::spectrum_table_from_json(load_json(table_path));
  auto values = ledger::spec_k(table, k);
  Report r;
  r.table.headers = {"value"};
  json list = json::array();
  for (const auto& v : values) {
    r.table.rows.push_back({str(v)});
    list.push_back(str(v));
  }
  r.doc = {{"k", k}, {"spectrum", list}};
  r.summary.push_back("count: " + std::to_string(values.size()));
  return r;
}

Report run_qm(const std::string& group_name, std::size_t samples, const Globals& g) {
  qm::FiniteGroupTable group = qm::FiniteGroupTable::by_name(group_name);
  auto lengths = qm::commutator_lengths(group);
  Rational constant;
  for (std::size_t n : lengths) constant = std::max(constant, qm::commutator_constant(n));
  std::mt19937_64 rng(g.seed);
  Report r;
  r.table.headers = {"sample", "defect", "sup", "bound", "margin"};
  json rows = json::array();
  bool all_hold = true;
  for (std::size_t s = 0; s < samples; ++s) {
    qm::GroupFunction mu = qm::random_function(group, rng);
    Rational d = qm::defect(group, mu), sup = qm::sup_norm(mu), bound = constant * d;
    Rational margin = bound - sup;
    all_hold = all_hold && margin >= 0 && abs(mu[0]) <= d;
    r.table.rows.push_back({std::to_string(s), str(d), str(sup), str(bound), str(margin)});
    rows.push_back({{"sample", s}, {"defect", str(d)}, {"sup", str(sup)}, {"bound", str(bound)}, {"margin", str(margin)}});
  }
  r.doc = {{"group", group_name},
           {"order", group.order()},
           {"seed", g.seed},
           {"constant", str(constant)},
           {"samples", rows},
           {"verdict", verdict(all_hold)}};
  r.summary = {"C_G: " + str(constant), "verdict: " + verdict(all_hold)};
  r.code = all_hold ? kExitPass : kExitFail;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations for orbifold Floer theory on symmetric products"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.as_json, "Emit JSON instead of a table");
  app.add_option("--trunc", g.trunc, "Novikov truncation p/q (idempotents, potential)");
  app.add_option("--seed", g.seed, "Seed for randomized runs");

  long k = 1, dim = 1, k_min = 1, k_max = 8, depth = 4;
  std::size_t size = 8, samples = 100;
  std::string omega = "1", b_text, a_text, gamma = "1", target, rule = "1/ceil(sqrt(k))", input, cls, alpha,
              group = "a5";

  auto* sectors = app.add_subcommand("sectors", "Chen-Ruan sectors of Sym^k");
  sectors->add_option("--k", k)->required();
  sectors->add_option("--dim", dim);

  auto* idem = app.add_subcommand("idempotents", "Idempotents of the symmetric invariant quantum algebra, k = 1..K");
  idem->add_option("--k", k)->required();
  idem->add_option("--omega", omega);

  auto* pot = app.add_subcommand("potential", "Critical point and Hessian of the circle-link potential");
  pot->add_option("--k", k)->required();
  pot->add_option("--B", b_text)->required();
  pot->add_option("--A", a_text);
  pot->add_option("--gamma", gamma);
  pot->add_option("--target-val", target);

  auto* weyl = app.add_subcommand("weyl", "Hessian-valuation certificate over a range of k");
  weyl->add_option("--bk-rule", rule);
  weyl->add_option("--k-min", k_min);
  weyl->add_option("--k-max", k_max);
  weyl->add_option("--gamma", gamma);

  auto* fl = app.add_subcommand("flow", "Synthetic flow categories");
  fl->require_subcommand(1);
  auto* verify = fl->add_subcommand("verify", "Check the d^2 identities");
  verify->add_option("--input", input, "Category file (default: a random category)");
  verify->add_option("--size", size);
  verify->add_option("--depth", depth);
  auto* spectral = fl->add_subcommand("spectral", "Spectral invariant of a class");
  spectral->add_option("--input", input)->required();
  spectral->add_option("--class", cls)->required();
  spectral->add_option("--alpha", alpha, "Deformation parameter");

  auto* spec = app.add_subcommand("spec", "Spec_k from a spectrum table");
  spec->add_option("--table", input)->required();
  spec->add_option("--k", k)->required();

  auto* qmc = app.add_subcommand("qm", "Defect bounds on a finite perfect group");
  qmc->add_option("--group", group);
  qmc->add_option("--samples", samples);

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();
  fl->fallthrough();
  verify->fallthrough();
  spectral->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    Report r;
    if (*sectors) r = run_sectors(k, dim);
    else if (*idem) r = run_idempotents(k, parse_rational_at(omega, 0), g);
    else if (*pot) r = run_potential(k, b_text, a_text, gamma, target, g);
    else if (*weyl) r = run_weyl(rule, k_min, k_max, gamma);
    else if (*verify) r = run_flow_verify(input, size, depth, g);
    else if (*spectral) r = run_flow_spectral(input, cls, alpha);
    else if (*spec) r = run_spec(input, k);
    else r = run_qm(group, samples, g);

    if (g.as_json) {
      std::cout << r.doc.dump(2) << "\n";
    } else {
      r.table.print(std::cout);
      for (const auto& s : r.summary) std::cout << s << "\n";
    }
    return r.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitError;
}
