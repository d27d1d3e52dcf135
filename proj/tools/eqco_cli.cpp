// eqco: exact equivariant-cohomology obstruction calculator.
//
// Commands:
//   cohomology    H^i(G; Z) for i = 0..max-degree
//   gr            associated-graded manifold-side groups GR(H^n_G(M))
//   verdict       symmetry verdict for (G, b2, flags)
//   census        the embedded order <= 15 catalog with classifications
//   profile-solve derived constraint system and its nonnegative solutions
//   selftest      the full criteria battery
//
// Output is deterministic: JSON objects are emitted with sorted keys and
// fixed formatting, tables with fixed column layout. Exit codes: 0 success,
// 1 selftest refutation, 2 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <eqco/borel.hpp>
#include <eqco/catalog.hpp>
#include <eqco/cohomology.hpp>
#include <eqco/groups.hpp>
#include <eqco/obstruction.hpp>
#include <eqco/selftest.hpp>
#include <eqco/specparse.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using json = nlohmann::json;
using eqco::groups::GroupSpec;

struct Options {
  std::string group;
  std::string format = "json";
  int max_degree = 9;
  long max_order = 15;
  long b2 = -1;
  std::string fixed_point = "unknown";
  bool pseudofree = false;
};

GroupSpec parse_group(const std::string& text) {
  return eqco::specparse::parse_group_spec(text);
}

// cohomology of G with trivial integer coefficients, closed form when the
// family has one, resolution otherwise
std::vector<eqco::exactalg::FgAbelianGroup> cohomology_table(const GroupSpec& spec, int hi) {
  const eqco::borel::GradedGroup w = eqco::borel::group_cohomology_window(spec, hi);
  std::vector<eqco::exactalg::FgAbelianGroup> out;
  for (int d = 0; d <= hi; ++d) out.push_back(w.entry(d));
  return out;
}

void emit(const json& doc, const std::string& format,
          const std::vector<std::pair<std::string, std::string>>& table_rows) {
  if (format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  size_t width = 0;
  for (const auto& [k, v] : table_rows) width = std::max(width, k.size());
  for (const auto& [k, v] : table_rows)
    std::cout << k << std::string(width - k.size() + 2, ' ') << v << "\n";
}

int cmd_cohomology(const Options& opt) {
  const GroupSpec spec = parse_group(opt.group);
  const auto table = cohomology_table(spec, opt.max_degree);
  json doc;
  doc["command"] = "cohomology";
  doc["group"] = spec.to_string();
  doc["max_degree"] = opt.max_degree;
  json rows = json::array();
  std::vector<std::pair<std::string, std::string>> trows;
  for (int d = 0; d <= opt.max_degree; ++d) {
    rows.push_back({{"degree", d}, {"group", table[d].to_string()}});
    trows.emplace_back("H^" + std::to_string(d), table[d].to_string());
  }
  doc["cohomology"] = rows;
  emit(doc, opt.format, trows);
  return 0;
}

int cmd_gr(const Options& opt) {
  if (opt.b2 < 0) throw std::invalid_argument("gr requires --b2 >= 0");
  const GroupSpec spec = parse_group(opt.group);
  json doc;
  doc["command"] = "gr";
  doc["group"] = spec.to_string();
  doc["b2"] = opt.b2;
  doc["max_degree"] = opt.max_degree;
  json rows = json::array();
  std::vector<std::pair<std::string, std::string>> trows;
  for (int d = 0; d <= opt.max_degree; ++d) {
    const auto g = eqco::borel::manifold_gr(spec, opt.b2, d);
    rows.push_back({{"degree", d}, {"group", g.to_string()}});
    trows.emplace_back("GR(H^" + std::to_string(d) + ")", g.to_string());
  }
  doc["gr"] = rows;
  emit(doc, opt.format, trows);
  return 0;
}

json verdict_to_json(const eqco::obstruction::Verdict& v) {
  json out;
  out["verdict"] = v.kind_string();
  out["reasons"] = v.reasons;
  json profiles = json::array();
  for (const auto& a : v.profiles) {
    json p;
    for (const auto& [k, val] : a) p[k] = val;
    profiles.push_back(p);
  }
  out["profiles"] = profiles;
  return out;
}

int cmd_verdict(const Options& opt) {
  if (opt.b2 < 0) throw std::invalid_argument("verdict requires --b2 >= 0");
  const GroupSpec spec = parse_group(opt.group);
  std::optional<bool> fixed;
  if (opt.fixed_point == "yes") fixed = true;
  if (opt.fixed_point == "no") fixed = false;
  std::optional<bool> pf;
  if (opt.pseudofree) pf = true;
  const eqco::obstruction::Verdict v = eqco::obstruction::main_verdict(spec, opt.b2, fixed, pf);
  json doc = verdict_to_json(v);
  doc["command"] = "verdict";
  doc["group"] = spec.to_string();
  doc["b2"] = opt.b2;
  doc["flags"] = {{"fixed_point", opt.fixed_point}, {"pseudofree", opt.pseudofree}};
  std::vector<std::pair<std::string, std::string>> trows{{"group", spec.to_string()},
                                                         {"b2", std::to_string(opt.b2)},
                                                         {"verdict", v.kind_string()}};
  for (size_t i = 0; i < v.reasons.size(); ++i)
    trows.emplace_back("reason " + std::to_string(i + 1), v.reasons[i]);
  emit(doc, opt.format, trows);
  return 0;
}

int cmd_census(const Options& opt) {
  json doc;
  doc["command"] = "census";
  doc["max_order"] = opt.max_order;
  json rows = json::array();
  std::vector<std::pair<std::string, std::string>> trows;
  for (const eqco::catalog::CatalogEntry& e : eqco::catalog::load_catalog()) {
    const eqco::groups::FiniteGroup g = eqco::groups::build_group(e.spec);
    if (g.order() > opt.max_order) continue;
    const bool minimal = eqco::groups::is_minimal_nonabelian(g);
    json row;
    row["name"] = e.name;
    row["spec"] = e.spec.to_string();
    row["order"] = g.order();
    row["abelian"] = g.is_abelian();
    row["minimal_nonabelian"] = minimal;
    row["class"] = eqco::groups::classify_minimal_nonabelian(g).to_string();
    rows.push_back(row);
    trows.emplace_back(e.name,
                       (minimal ? "minimal nonabelian: " : g.is_abelian() ? "abelian: " : ": ") +
                           eqco::groups::classify_minimal_nonabelian(g).to_string());
  }
  doc["census"] = rows;
  emit(doc, opt.format, trows);
  return 0;
}

int cmd_profile_solve(const Options& opt) {
  if (opt.b2 < 0) throw std::invalid_argument("profile-solve requires --b2 >= 0");
  const GroupSpec spec = parse_group(opt.group);
  eqco::obstruction::ConstraintSystem sys =
      eqco::obstruction::constraint_system_from_comparison(spec);
  sys.require_n1_positive = opt.fixed_point == "yes";
  const auto sols = eqco::obstruction::solve_nonneg(sys, opt.b2, opt.b2 + 2);
  json doc;
  doc["command"] = "profile-solve";
  doc["group"] = spec.to_string();
  doc["b2"] = opt.b2;
  doc["unknowns"] = sys.unknowns;
  json eqs = json::array();
  for (const auto& e : sys.equations) eqs.push_back(e.to_string());
  doc["equations"] = eqs;
  doc["require_n1_positive"] = sys.require_n1_positive;
  json solutions = json::array();
  std::vector<std::pair<std::string, std::string>> trows;
  for (const auto& e : sys.equations) trows.emplace_back("equation", e.to_string());
  for (const auto& a : sols) {
    json s;
    std::string line;
    for (const auto& [k, v] : a) {
      s[k] = v;
      line += (line.empty() ? "" : ", ") + k + " = " + std::to_string(v);
    }
    solutions.push_back(s);
    trows.emplace_back("solution", line);
  }
  doc["solutions"] = solutions;
  emit(doc, opt.format, trows);
  return 0;
}

int cmd_selftest(const Options& opt) {
  const auto results = eqco::selftest::run_battery();
  json doc;
  doc["command"] = "selftest";
  json rows = json::array();
  bool all_pass = true;
  std::vector<std::pair<std::string, std::string>> trows;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
    rows.push_back({{"criterion", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"detail", r.detail},
                    {"seconds", std::string(buf)}});
    trows.emplace_back("criterion " + std::to_string(r.id) + " (" + r.name + ")",
                       std::string(r.pass ? "PASS" : "FAIL") + "  " + r.detail + "  [" + buf +
                           "s]");
  }
  doc["results"] = rows;
  doc["pass"] = all_pass;
  emit(doc, opt.format, trows);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact equivariant-cohomology obstruction calculator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_group, bool needs_b2) {
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "table"}));
    if (needs_group) cmd->add_option("--group", opt.group, "group spec")->required();
    if (needs_b2) cmd->add_option("--b2", opt.b2, "second Betti number");
  };

  CLI::App* coh = app.add_subcommand("cohomology", "integral group cohomology table");
  add_common(coh, true, false);
  coh->add_option("--max-degree", opt.max_degree, "top degree")->check(CLI::Range(0, 40));

  CLI::App* gr = app.add_subcommand("gr", "manifold-side associated graded groups");
  add_common(gr, true, true);
  gr->add_option("--max-degree", opt.max_degree, "top degree")->check(CLI::Range(0, 40));

  CLI::App* verdict = app.add_subcommand("verdict", "symmetry verdict");
  add_common(verdict, true, true);
  verdict->add_option("--fixed-point", opt.fixed_point, "fixed point assumption")
      ->check(CLI::IsMember({"yes", "no", "unknown"}));
  verdict->add_flag("--pseudofree", opt.pseudofree, "assume a pseudofree action");

  CLI::App* census = app.add_subcommand("census", "catalog census");
  add_common(census, false, false);
  census->add_option("--max-order", opt.max_order, "order bound")->check(CLI::Range(1L, 15L));

  CLI::App* solve = app.add_subcommand("profile-solve", "derived constraint system");
  add_common(solve, true, true);
  solve->add_option("--fixed-point", opt.fixed_point, "fixed point assumption")
      ->check(CLI::IsMember({"yes", "no", "unknown"}));

  CLI::App* selftest = app.add_subcommand("selftest", "run the criteria battery");
  add_common(selftest, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (coh->parsed()) return cmd_cohomology(opt);
    if (gr->parsed()) return cmd_gr(opt);
    if (verdict->parsed()) return cmd_verdict(opt);
    if (census->parsed()) return cmd_census(opt);
    if (solve->parsed()) return cmd_profile_solve(opt);
    if (selftest->parsed()) return cmd_selftest(opt);
  } catch (const eqco::specparse::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
