// The self-test battery: every headline computation of the library, run
// end-to-end with its expected outcome, timed per criterion. Used by the
// CLI `selftest` command and by the acceptance harness.
#pragma once

#include <eqco/borel.hpp>
#include <eqco/catalog.hpp>
#include <eqco/cohomology.hpp>
#include <eqco/gmodules.hpp>
#include <eqco/groups.hpp>
#include <eqco/localrep.hpp>
#include <eqco/obstruction.hpp>
#include <eqco/singular.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace eqco::selftest {

using exactalg::FgAbelianGroup;
using groups::GroupSpec;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::shared_ptr<const groups::FiniteGroup> make_group(const GroupSpec& spec) {
  return std::make_shared<const groups::FiniteGroup>(groups::build_group(spec));
}

struct Check {
  bool ok = true;
  long count = 0;
  std::string first_failure;

  void expect(bool cond, const std::string& what) {
    ++count;
    if (!cond && ok) {
      ok = false;
      first_failure = what;
    }
  }
  std::string summary(const std::string& good) const {
    if (ok) return good + " (" + std::to_string(count) + " checks)";
    return "FAILED: " + first_failure;
  }
};

inline CriterionResult run_one(int id, const std::string& name,
                               const std::function<void(Check&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    body(c);
    r.pass = c.ok;
    r.detail = c.summary("ok");
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

// 1. resolution cohomology reproduces the closed-form tables, degrees 0-9
inline CriterionResult criterion_closed_form_tables() {
  return detail::run_one(1, "closed-form table reproduction", [](detail::Check& c) {
    const std::vector<GroupSpec> specs = {
        GroupSpec::dihedral(3),          GroupSpec::dihedral(5),
        GroupSpec::dihedral(7),          GroupSpec::quaternion8(),
        GroupSpec::metacyclic(3, 4, 2),  GroupSpec::metacyclic(7, 3, 2),
        GroupSpec::metacyclic(5, 4, 3)};
    for (const GroupSpec& spec : specs) {
      auto g = detail::make_group(spec);
      cohomology::Resolution r =
          cohomology::build_resolution(g, cohomology::auto_strategy(*g), 10, false);
      const auto got = cohomology::cohomology_range(r, gmodules::GModule::trivial(g), 0, 9);
      for (int d = 0; d <= 9; ++d)
        c.expect(got[d] == cohomology::closed_form_cohomology(spec, d),
                 spec.to_string() + " degree " + std::to_string(d));
    }
  });
}

// 2. H^n(D_p; Ck(Z)) = Z/p iff n = 3 mod 4, via the Metacyclic resolution
inline CriterionResult criterion_ck() {
  return detail::run_one(2, "Ck coefficients on D_p", [](detail::Check& c) {
    for (long p : {3L, 5L}) {
      auto g = detail::make_group(GroupSpec::dihedral(p));
      int t = -1;
      for (int x = 0; x < g->order() && t < 0; ++x)
        if (g->element_order(x) == 2) t = x;
      const std::vector<int> h{g->identity(), t};
      const gmodules::GModule ck = gmodules::ck_module(g, h, gmodules::GModule::trivial(g));
      cohomology::Resolution r =
          cohomology::build_resolution(g, cohomology::Resolution::Kind::Metacyclic, 9, false);
      for (int n = 0; n <= 8; ++n) {
        const FgAbelianGroup got = cohomology::cohomology(r, ck, n);
        const FgAbelianGroup want = n % 4 == 3 ? FgAbelianGroup::cyclic(p)
                                               : FgAbelianGroup::trivial();
        c.expect(got == want, "D_" + std::to_string(p) + " degree " + std::to_string(n));
      }
    }
  });
}

// 3. bar and specialized resolutions agree, order <= 8, degrees <= 4
inline CriterionResult criterion_bar_oracle() {
  return detail::run_one(3, "bar-resolution oracle equivalence", [](detail::Check& c) {
    for (const catalog::CatalogEntry& e : catalog::load_catalog()) {
      auto g = detail::make_group(e.spec);
      if (g->order() > 8) continue;
      cohomology::Resolution bar =
          cohomology::build_resolution(g, cohomology::Resolution::Kind::Bar, 4, false);
      cohomology::Resolution spec =
          cohomology::build_resolution(g, cohomology::auto_strategy(*g), 4, false);
      // coinduce from a largest proper subgroup (the trivial one for C_p)
      std::vector<int> h{g->identity()};
      for (const std::vector<int>& sub : groups::all_subgroups(*g, g->order()))
        if (static_cast<int>(sub.size()) < g->order() && sub.size() > h.size()) h = sub;
      const gmodules::GModule triv = gmodules::GModule::trivial(g);
      const gmodules::GModule coind =
          gmodules::coinduced_module(g, h, gmodules::GModule::trivial_over(g, h, 1));
      for (const gmodules::GModule* m : {&triv, &coind})
        for (int d = 0; d <= 4; ++d)
          c.expect(cohomology::cohomology(bar, *m, d) == cohomology::cohomology(spec, *m, d),
                   e.name + " degree " + std::to_string(d));
    }
  });
}

// 4. Shapiro suite: >= 20 (G, H, M) cases, degrees 0-6
inline CriterionResult criterion_shapiro() {
  return detail::run_one(4, "Shapiro suite", [](detail::Check& c) {
    const std::vector<GroupSpec> specs = {
        GroupSpec::dihedral(3),         GroupSpec::dihedral(5),
        GroupSpec::quaternion8(),       GroupSpec::metacyclic(3, 4, 2),
        GroupSpec::metacyclic(7, 3, 2), GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}),
        GroupSpec::cyclic(12),          GroupSpec::dihedral(4)};
    long cases = 0;
    for (const GroupSpec& spec : specs) {
      auto g = detail::make_group(spec);
      // up to three proper nontrivial subgroups, distinct orders preferred
      std::set<size_t> used_orders;
      long here = 0;
      for (const std::vector<int>& h : groups::all_subgroups(*g, g->order())) {
        if (h.size() <= 1 || static_cast<int>(h.size()) == g->order()) continue;
        if (!used_orders.insert(h.size()).second) continue;
        if (++here > 3) break;
        const auto rep = cohomology::shapiro_check(
            g, h, gmodules::GModule::trivial_over(g, h, 1), 0, 6);
        c.expect(rep.ok, spec.to_string() + " subgroup of order " + std::to_string(h.size()));
        ++cases;
      }
    }
    c.expect(cases >= 20, "needs >= 20 cases, got " + std::to_string(cases));
  });
}

// 5. derived constraint systems match the displayed equations
inline CriterionResult criterion_constraints() {
  return detail::run_one(5, "constraint derivation", [](detail::Check& c) {
    const obstruction::ConstraintSystem q8 =
        obstruction::constraint_system_from_comparison(GroupSpec::quaternion8());
    std::set<std::string> eqs;
    for (const auto& e : q8.equations) eqs.insert(e.to_string());
    c.expect(eqs.count("2*n1 + 5*n2 = 4 + 3*b2") == 1, "Q8 first displayed equation");
    c.expect(eqs.count("3*n1 + 5*n2 = 6 + 2*b2") == 1, "Q8 second displayed equation");
    for (long b2 = 0; b2 <= 5; ++b2) {
      const auto sols = obstruction::solve_nonneg(q8, b2, b2 + 2);
      if (b2 <= 2) {
        c.expect(sols.size() == 1 && sols[0].at("n1") == 2 - b2 && sols[0].at("n2") == b2,
                 "Q8 solution n1 = 2 - b2, n2 = b2 at b2 = " + std::to_string(b2));
      } else {
        c.expect(sols.empty(), "Q8 no solution at b2 = " + std::to_string(b2));
      }
    }
    const obstruction::ConstraintSystem mc =
        obstruction::constraint_system_from_comparison(GroupSpec::metacyclic(3, 4, 2));
    std::set<std::string> meqs;
    for (const auto& e : mc.equations) meqs.insert(e.to_string());
    c.expect(meqs.count("n1 + n2 = 2") == 1, "MC(3;4;2) n1 + n2 = 2");
    c.expect(meqs.count("n2 = 0 + b2") == 1, "MC(3;4;2) n2 = b2");
    for (long b2 = 0; b2 <= 4; ++b2)
      for (const auto& a : obstruction::solve_nonneg(mc, b2, b2 + 2))
        c.expect(a.at("n1") + b2 == 2, "MC(3;4;2) n1 + b2 = 2 at b2 = " + std::to_string(b2));
  });
}

// 6. verdict battery
inline CriterionResult criterion_verdicts() {
  return detail::run_one(6, "verdict battery", [](detail::Check& c) {
    using obstruction::Verdict;
    for (long b2 : {3L, 4L}) {
      c.expect(obstruction::main_verdict(GroupSpec::quaternion8(), b2).ruled_out(),
               "Q8 at b2 = " + std::to_string(b2));
      c.expect(obstruction::main_verdict(GroupSpec::metacyclic(3, 4, 2), b2).ruled_out(),
               "MC(3;4;2) at b2 = " + std::to_string(b2));
    }
    for (long b2 : {2L, 3L, 4L}) {
      const Verdict v = obstruction::rank1_verdict(GroupSpec::metacyclic(7, 3, 2), b2, false);
      c.expect(v.ruled_out() && v.reasons[0].find("period") != std::string::npos,
               "MC(7;3;2) period mismatch at b2 = " + std::to_string(b2));
    }
    const Verdict d3 = obstruction::rank1_verdict(GroupSpec::dihedral(3), 1, true);
    c.expect(d3.kind == Verdict::Kind::Constrained && d3.profiles.size() == 1 &&
                 d3.profiles[0].at("n1") == 1 && d3.profiles[0].at("n2") == 0 &&
                 d3.profiles[0].at("n3") == 1 && d3.profiles[0].at("s") == 0,
             "D_3 unique profile at b2 = 1");
    for (long b2 : {2L, 3L})
      c.expect(obstruction::rank1_verdict(GroupSpec::dihedral(3), b2, true).ruled_out(),
               "D_3 with fixed point at b2 = " + std::to_string(b2));
    c.expect(obstruction::main_verdict(GroupSpec::metacyclic(4, 2, 3), 3).ruled_out(),
             "D_4 at b2 = 3");
    c.expect(
        obstruction::main_verdict(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}), 3).ruled_out(),
        "A_4 at b2 = 3");
    for (const GroupSpec& spec :
         {GroupSpec::cyclic(12),
          GroupSpec::direct_product({GroupSpec::cyclic(4), GroupSpec::cyclic(2)})}) {
      const Verdict v = obstruction::main_verdict(spec, 3);
      bool forced = false;
      for (const std::string& r : v.reasons)
        forced = forced || r.find("fixed point necessarily exists") != std::string::npos;
      c.expect(v.kind == Verdict::Kind::AllowedTorusSubgroup && forced,
               spec.to_string() + " allowed with fixed point forced");
    }
  });
}

// 7. classification census over the order <= 15 catalog
inline CriterionResult criterion_census() {
  return detail::run_one(7, "classification census", [](detail::Check& c) {
    const std::set<std::string> expected = {"S3", "D4", "Q8", "D5", "A4", "Dic3", "D7"};
    std::set<std::string> found;
    for (const catalog::CatalogEntry& e : catalog::load_catalog()) {
      const groups::FiniteGroup g = groups::build_group(e.spec);
      if (!groups::is_minimal_nonabelian(g)) continue;
      found.insert(e.name);
      const auto cls = groups::classify_minimal_nonabelian(g);
      using Tag = groups::MinimalNonabelianClass::Tag;
      c.expect(cls.tag == Tag::PGroupType1 || cls.tag == Tag::PGroupType2 ||
                   cls.tag == Tag::Quaternion || cls.tag == Tag::SemidirectEPQ,
               e.name + " classified");
    }
    c.expect(found == expected, "minimal nonabelian census set mismatch");
  });
}

// 8. exponent-lemma search finds zero counterexamples
inline CriterionResult criterion_exponent_lemma() {
  return detail::run_one(8, "exponent-lemma search", [](detail::Check& c) {
    const auto ce = groups::exponent_lemma_search(81, {2, 3, 5, 7});
    c.expect(ce.empty(), "found " + std::to_string(ce.size()) + " counterexamples");
  });
}

// 9. flower complex Euler characteristic and H^1 rank
inline CriterionResult criterion_flower() {
  return detail::run_one(9, "flower consistency", [](detail::Check& c) {
    for (long p : {3L, 5L}) {
      for (long m : {1L, 2L, 3L}) {
        const singular::FlowerComplex f = singular::build_flower_complex(p, m);
        c.expect(f.c0 - f.c1 + f.c2 == m - p * (m - 1) + p,
                 "cell count Euler characteristic");
        long betti_sum = 0;
        bool torsion_free = true;
        for (int d : {0, 1, 2}) {
          const FgAbelianGroup h = f.underlying_cohomology(d);
          betti_sum += (d == 1 ? -1 : 1) * h.free_rank();
          torsion_free = torsion_free && h.invariant_factors().empty();
        }
        c.expect(betti_sum == m - p * (m - 1) + p, "Betti Euler characteristic");
        c.expect(f.underlying_cohomology(1).free_rank() == (p - 1) * (m - 1), "H^1 rank");
        c.expect(torsion_free, "torsion-free cohomology");
      }
    }
  });
}

// 10. period detection and the rank-one mismatch flag
inline CriterionResult criterion_periods() {
  return detail::run_one(10, "period detection", [](detail::Check& c) {
    const GroupSpec spec = GroupSpec::metacyclic(7, 3, 2);
    const auto mwin = borel::group_cohomology_window(spec, 14);
    c.expect(borel::graded_period(mwin, 1) == std::optional<int>(6),
             "manifold-side period from degree 1");
    const auto rows = singular::sigma_fiber_rows(
        spec, singular::SingularProfile::twisted_orbits(1, 1, 1));
    borel::GradedGroup swin;
    for (int n = 5; n <= 11; ++n) {
      const auto r = borel::singular_gr(rows, n);
      c.expect(r.certificate.verdict, "collapse certificate at degree " + std::to_string(n));
      swin.set(n, r.entry);
    }
    c.expect(borel::graded_period(swin, 5) == std::optional<int>(2),
             "singular-side period from degree 5");
    const auto v = obstruction::rank1_verdict(spec, 4, false);
    c.expect(v.ruled_out() && v.reasons[0].find("period") != std::string::npos,
             "rank1_verdict flags the mismatch");
  });
}

// 11. G-signature arithmetic and the connected-sum corollary
inline CriterionResult criterion_gsignature() {
  return detail::run_one(11, "G-signature arithmetic", [](detail::Check& c) {
    using localrep::Angle;
    const Angle pi(1, 1), half(1, 2);
    for (const Angle other : {Angle(1, 2), Angle(2, 3), Angle(5, 7)}) {
      const auto s = obstruction::gsignature_cot_sum(
          {{pi, other}, {other, pi}, {pi, pi}, {pi, other}});
      c.expect(s.exact_zero && s.value == 0.0, "exact zero with an angle pi at every point");
    }
    const auto one = obstruction::gsignature_cot_sum({{half, half}});
    c.expect(!one.exact_zero && std::abs(one.value - (-1.0)) <= 1e-9, "single (pi/2, pi/2)");
    for (const GroupSpec& spec : {GroupSpec::quaternion8(), GroupSpec::metacyclic(3, 4, 2),
                                  GroupSpec::metacyclic(4, 2, 3)})
      c.expect(obstruction::cp2cp2_verdict(spec).ruled_out(),
               spec.to_string() + " ruled out on the connected sum");
  });
}

inline std::vector<CriterionResult> run_battery() {
  return {criterion_closed_form_tables(),
          criterion_ck(),
          criterion_bar_oracle(),
          criterion_shapiro(),
          criterion_constraints(),
          criterion_verdicts(),
          criterion_census(),
          criterion_exponent_lemma(),
          criterion_flower(),
          criterion_periods(),
          criterion_gsignature()};
}

}  // namespace eqco::selftest
