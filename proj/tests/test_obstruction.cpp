#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eqco/catalog.hpp>
#include <eqco/cohomology.hpp>
#include <eqco/groups.hpp>
#include <eqco/obstruction.hpp>

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

using namespace eqco;
using namespace eqco::obstruction;
using groups::GroupSpec;
using localrep::Angle;

namespace {

std::set<std::string> equation_strings(const ConstraintSystem& sys) {
  std::set<std::string> out;
  for (const Equation& eq : sys.equations) out.insert(eq.to_string());
  return out;
}

}  // namespace

TEST_CASE("derived Q8 system reproduces the displayed equations") {
  const ConstraintSystem sys = constraint_system_from_comparison(GroupSpec::quaternion8());
  const std::set<std::string> eqs = equation_strings(sys);
  // frozen displayed forms; the derivation must not drift
  CHECK(eqs.count("2*n1 + 5*n2 = 4 + 3*b2"));
  CHECK(eqs.count("3*n1 + 5*n2 = 6 + 2*b2"));
  CHECK(sys.equations.size() == 2);
  CHECK(sys.unknowns == std::vector<std::string>{"n1", "n2"});
}

TEST_CASE("derived Z_3 x| Z_4 system gives n2 = b2 and n1 + n2 = 2") {
  const ConstraintSystem sys = constraint_system_from_comparison(GroupSpec::metacyclic(3, 4, 2));
  const std::set<std::string> eqs = equation_strings(sys);
  CHECK(eqs.count("n2 = 0 + b2"));
  CHECK(eqs.count("n1 + n2 = 2"));
  // solution-set equality with the displayed pair over a window of b2 values
  for (long b2 : {0L, 1L, 2L, 3L}) {
    std::set<Assignment> derived;
    for (const Assignment& a : solve_nonneg(sys, b2, b2 + 2)) derived.insert(a);
    std::set<Assignment> displayed;
    for (long n1 = 0; n1 <= b2 + 2; ++n1)
      for (long n2 = 0; n2 <= b2 + 2; ++n2)
        if (n2 == b2 && n1 + n2 == 2) displayed.insert({{"n1", n1}, {"n2", n2}});
    CHECK(derived == displayed);
  }
}

TEST_CASE("derived D_p system contains the degree-8 p-torsion equation") {
  const ConstraintSystem sys = constraint_system_from_comparison(GroupSpec::dihedral(3));
  const std::set<std::string> eqs = equation_strings(sys);
  CHECK(eqs.count("n1 + 2*n2 + n3 + s = 2"));
  CHECK(eqs.count("2*n2 + n3 = 0 + b2"));
  // the comparison is exact arithmetic: rerunning derives the same system
  const ConstraintSystem again = constraint_system_from_comparison(GroupSpec::dihedral(3));
  CHECK(equation_strings(again) == eqs);
}

TEST_CASE("the comparison rejects unsupported families") {
  CHECK_THROWS_AS(constraint_system_from_comparison(GroupSpec::cyclic(6)),
                  std::invalid_argument);
  CHECK_THROWS_AS(constraint_system_from_comparison(GroupSpec::metacyclic(7, 3, 2)),
                  std::invalid_argument);
}

TEST_CASE("solve_nonneg enumerates completely within bounds") {
  // all-zero right-hand side forces the zero solution
  ConstraintSystem sys;
  sys.unknowns = {"x", "y"};
  Equation eq;
  eq.lhs = {{"x", 1}, {"y", 2}};
  sys.equations.push_back(eq);
  const auto sols = solve_nonneg(sys, 0, 3);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].at("x") == 0);
  CHECK(sols[0].at("y") == 0);
  CHECK_THROWS_AS(solve_nonneg(sys, 0, -1), std::invalid_argument);
  // the fixed-point side condition prunes n1 = 0
  ConstraintSystem fp;
  fp.unknowns = {"n1"};
  fp.require_n1_positive = true;
  CHECK(solve_nonneg(fp, 0, 2).size() == 2);  // n1 in {1, 2}
}

TEST_CASE("rank-one verdicts: the q > 2 period argument") {
  // every b2 >= 2 is ruled out by the period mismatch
  for (long b2 : {2L, 3L, 4L, 7L}) {
    const Verdict v = rank1_verdict(GroupSpec::metacyclic(7, 3, 2), b2, false);
    CHECK(v.kind == Verdict::Kind::RuledOut);
    CHECK(v.reasons[0].find("period") != std::string::npos);
    CHECK(v.reasons[0].find("6") != std::string::npos);
    CHECK(v.reasons[0].find("2") != std::string::npos);
  }
  // when q does not divide b2 + 2 the Euler count is recorded as well
  const Verdict v3 = rank1_verdict(GroupSpec::metacyclic(7, 3, 2), 3, false);
  CHECK(v3.reasons.back().find("divide") != std::string::npos);
}

TEST_CASE("rank-one verdicts: Q8") {
  CHECK(rank1_verdict(GroupSpec::quaternion8(), 3, false).kind == Verdict::Kind::RuledOut);
  CHECK(rank1_verdict(GroupSpec::quaternion8(), 3, true).kind == Verdict::Kind::RuledOut);
  const Verdict v = rank1_verdict(GroupSpec::quaternion8(), 2, false);
  REQUIRE(v.kind == Verdict::Kind::Constrained);
  REQUIRE(v.profiles.size() == 1);
  CHECK(v.profiles[0].at("n1") == 0);
  CHECK(v.profiles[0].at("n2") == 2);
  // a fixed point is incompatible with the unique profile
  CHECK(rank1_verdict(GroupSpec::quaternion8(), 2, true).kind == Verdict::Kind::RuledOut);
}

TEST_CASE("rank-one verdicts: Z_3 x| Z_4 and the dihedral case") {
  CHECK(rank1_verdict(GroupSpec::metacyclic(3, 4, 2), 3, false).kind ==
        Verdict::Kind::RuledOut);
  CHECK(rank1_verdict(GroupSpec::metacyclic(3, 4, 2), 3, true).kind == Verdict::Kind::RuledOut);
  // D_3 with a fixed point: unique profile at b2 = 1, nothing at b2 >= 2
  const Verdict v = rank1_verdict(GroupSpec::dihedral(3), 1, true);
  REQUIRE(v.kind == Verdict::Kind::Constrained);
  REQUIRE(v.profiles.size() == 1);
  const Assignment& a = v.profiles[0];
  CHECK(a.at("n1") == 1);
  CHECK(a.at("n2") == 0);
  CHECK(a.at("n3") == 1);
  CHECK(a.at("s") == 0);  // every flower has m_i = 1
  for (long b2 : {2L, 3L, 4L})
    CHECK(rank1_verdict(GroupSpec::dihedral(3), b2, true).kind == Verdict::Kind::RuledOut);
  // wrong family
  CHECK_THROWS_AS(rank1_verdict(GroupSpec::metacyclic(4, 2, 3), 3, false),
                  std::invalid_argument);
  CHECK_THROWS_AS(rank1_verdict(GroupSpec::cyclic(6), 3, false), std::invalid_argument);
}

TEST_CASE("constrained profiles satisfy Lefschetz and Edmonds") {
  const Verdict q8 = rank1_verdict(GroupSpec::quaternion8(), 2, false);
  for (const Assignment& a : q8.profiles) {
    const auto prof = singular::SingularProfile::rank1(a.at("n1"), a.at("n2"));
    const auto eq = singular::lefschetz_constraint(singular::ElementKind::Rank1Generic, prof, 2);
    CHECK(singular::lefschetz_satisfied(eq, prof, 2));
    CHECK(singular::edmonds_check(a.at("n2"), a.at("n1") == 0, 2));
  }
  const Verdict d3 = rank1_verdict(GroupSpec::dihedral(3), 1, true);
  for (const Assignment& a : d3.profiles) {
    std::vector<long> mi(a.at("n1"), 1);
    if (!mi.empty()) mi[0] += a.at("s");
    const auto prof =
        singular::SingularProfile::dihedral(mi, a.at("n2"), a.at("n3"), a.at("n4"), a.at("n5"));
    const auto eq = singular::lefschetz_constraint(singular::ElementKind::DihedralS, prof, 1);
    CHECK(singular::lefschetz_satisfied(eq, prof, 1));
    CHECK(singular::edmonds_check(2 * a.at("n2"), a.at("n1") == 0 && a.at("n3") == 0, 1));
  }
}

TEST_CASE("embeds_in_rank2_torus") {
  CHECK(embeds_in_rank2_torus(
      groups::build_group(GroupSpec::direct_product({GroupSpec::cyclic(12), GroupSpec::cyclic(2)}))));
  CHECK_FALSE(embeds_in_rank2_torus(groups::build_group(GroupSpec::elementary_abelian(2, 3))));
  CHECK_FALSE(embeds_in_rank2_torus(groups::build_group(GroupSpec::dihedral(3))));
  CHECK(embeds_in_rank2_torus(groups::build_group(GroupSpec::cyclic(7))));
}

TEST_CASE("rank >= 2 verdicts") {
  // D_4, in both presentations
  CHECK(rank2plus_verdict(GroupSpec::g1(2, 1, 2), 3, false).kind == Verdict::Kind::RuledOut);
  CHECK(rank2plus_verdict(GroupSpec::metacyclic(4, 2, 3), 3, false).kind ==
        Verdict::Kind::RuledOut);
  // A_4
  CHECK(rank2plus_verdict(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}), 3, false).kind ==
        Verdict::Kind::RuledOut);
  // abelian of rank 3
  const Verdict r3 = rank2plus_verdict(GroupSpec::elementary_abelian(2, 3), 3, false);
  CHECK(r3.kind == Verdict::Kind::RuledOut);
  CHECK(r3.reasons.back().find("rank >= 3") != std::string::npos);
  // (Z_3)^2 embeds
  CHECK(rank2plus_verdict(GroupSpec::elementary_abelian(3, 2), 4, true).kind ==
        Verdict::Kind::AllowedTorusSubgroup);
  // the exceptional-case precondition
  CHECK_THROWS_AS(rank2plus_verdict(GroupSpec::elementary_abelian(3, 2), 2, false),
                  std::domain_error);
  // cyclic groups have no embedded Z_p x Z_p
  CHECK_THROWS_AS(rank2plus_verdict(GroupSpec::cyclic(8), 3, false), std::invalid_argument);
}

TEST_CASE("main verdicts match the theorem") {
  // cyclic: allowed, fixed point forced at b2 >= 3
  const Verdict c12 = main_verdict(GroupSpec::cyclic(12), 5);
  CHECK(c12.kind == Verdict::Kind::AllowedTorusSubgroup);
  bool fixed_forced = false;
  for (const std::string& r : c12.reasons)
    fixed_forced = fixed_forced || r.find("fixed point necessarily exists") != std::string::npos;
  CHECK(fixed_forced);
  // rank-2 abelian allowed
  CHECK(main_verdict(GroupSpec::elementary_abelian(3, 2), 3).kind ==
        Verdict::Kind::AllowedTorusSubgroup);
  // S_3 with a fixed point at b2 = 2 is ruled out
  CHECK(main_verdict(GroupSpec::metacyclic(3, 2, 2), 2, true).kind == Verdict::Kind::RuledOut);
  // pseudofree kills rank 2
  const Verdict pf = main_verdict(GroupSpec::elementary_abelian(3, 2), 4, std::nullopt, true);
  CHECK(pf.kind == Verdict::Kind::RuledOut);
  CHECK(pf.reasons[0].find("linking sphere") != std::string::npos);
  // pseudofree nonabelian is ruled out immediately
  CHECK(main_verdict(GroupSpec::dihedral(5), 4, std::nullopt, true).kind ==
        Verdict::Kind::RuledOut);
  // minimal nonabelian groups at b2 = 3
  CHECK(main_verdict(GroupSpec::quaternion8(), 3).kind == Verdict::Kind::RuledOut);
  CHECK(main_verdict(GroupSpec::metacyclic(3, 4, 2), 3).kind == Verdict::Kind::RuledOut);
  CHECK(main_verdict(GroupSpec::metacyclic(4, 2, 3), 3).kind == Verdict::Kind::RuledOut);
  CHECK(main_verdict(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}), 3).kind ==
        Verdict::Kind::RuledOut);
  // abelian rank 3
  CHECK(main_verdict(GroupSpec::elementary_abelian(2, 3), 3).kind == Verdict::Kind::RuledOut);
  // a non-minimal nonabelian group is handled through its subgroups
  CHECK(main_verdict(GroupSpec::dihedral(6), 3).kind == Verdict::Kind::RuledOut);
  // scope
  CHECK_THROWS_AS(main_verdict(GroupSpec::cyclic(3), 1), std::invalid_argument);
}

TEST_CASE("abelian groups of rank <= 2 are never ruled out at b2 >= 3") {
  for (const catalog::CatalogEntry& e : catalog::load_catalog()) {
    const groups::FiniteGroup g = groups::build_group(e.spec);
    if (!g.is_abelian()) continue;
    if (groups::abelianization(g).invariant_factors().size() > 2) continue;
    for (long b2 : {3L, 4L, 5L})
      CHECK(main_verdict(e.spec, b2).kind == Verdict::Kind::AllowedTorusSubgroup);
  }
}

TEST_CASE("subgroup monotonicity of main_verdict over the catalog") {
  const auto entries = catalog::load_catalog();
  std::vector<groups::Fingerprint> prints;
  std::vector<Verdict::Kind> kinds;
  for (const auto& e : entries) {
    prints.push_back(groups::fingerprint(groups::build_group(e.spec)));
    kinds.push_back(main_verdict(e.spec, 3).kind);
  }
  for (const auto& e : entries) {
    const groups::FiniteGroup g = groups::build_group(e.spec);
    const Verdict::Kind gk = main_verdict(e.spec, 3).kind;
    for (const std::vector<int>& h : groups::all_subgroups(g, 64)) {
      auto [sub, old_index] = cohomology::subgroup_as_group(g, h);
      const groups::Fingerprint fp = groups::fingerprint(sub);
      for (size_t t = 0; t < entries.size(); ++t) {
        if (!(prints[t] == fp)) continue;
        if (kinds[t] == Verdict::Kind::RuledOut) CHECK(gk == Verdict::Kind::RuledOut);
      }
    }
  }
}

TEST_CASE("G-signature cotangent sums") {
  const Angle pi(1, 1), half(1, 2);
  // four points, each with one angle pi: exactly zero regardless of the rest
  for (const Angle other : {Angle(1, 2), Angle(2, 3), Angle(5, 7), Angle(13, 9)}) {
    const CotSum s = gsignature_cot_sum({{pi, other}, {other, pi}, {pi, pi}, {pi, other}});
    CHECK(s.exact_zero);
    CHECK(s.value == 0.0);
  }
  // single point (pi/2, pi/2): -cot(pi/4)^2 = -1
  const CotSum one = gsignature_cot_sum({{half, half}});
  CHECK_FALSE(one.exact_zero);
  CHECK(std::abs(one.value - (-1.0)) <= 1e-9);
  // empty sum
  const CotSum empty = gsignature_cot_sum({});
  CHECK(empty.exact_zero);
  CHECK(empty.value == 0.0);
  // mixed: the pi-terms drop out exactly
  const CotSum mixed = gsignature_cot_sum({{half, half}, {pi, Angle(2, 3)}});
  CHECK_FALSE(mixed.exact_zero);
  CHECK(std::abs(mixed.value - (-1.0)) <= 1e-9);
  // 3pi/2 gives cot(3pi/4) = -1 exactly: term -(-1)(-1) = -1
  const CotSum neg = gsignature_cot_sum({{Angle(3, 2), Angle(3, 2)}});
  CHECK(std::abs(neg.value - (-1.0)) <= 1e-9);
  // zero angles are rejected
  CHECK_THROWS_AS(gsignature_cot_sum({{Angle(0, 1), half}}), std::invalid_argument);
}

TEST_CASE("the connected-sum corollary rules out every minimal nonabelian group") {
  const Verdict q8 = cp2cp2_verdict(GroupSpec::quaternion8());
  CHECK(q8.kind == Verdict::Kind::RuledOut);
  bool sig = false;
  for (const std::string& r : q8.reasons) sig = sig || r.find("signature") != std::string::npos;
  CHECK(sig);
  const Verdict dic3 = cp2cp2_verdict(GroupSpec::metacyclic(3, 4, 2));
  CHECK(dic3.kind == Verdict::Kind::RuledOut);
  sig = false;
  for (const std::string& r : dic3.reasons) sig = sig || r.find("signature") != std::string::npos;
  CHECK(sig);
  // D_4 goes through the rank-two reduction
  const Verdict d4 = cp2cp2_verdict(GroupSpec::metacyclic(4, 2, 3));
  CHECK(d4.kind == Verdict::Kind::RuledOut);
  CHECK(d4.reasons[0].find("case 4") != std::string::npos);
  // D_p is the recorded logical rule
  const Verdict d3 = cp2cp2_verdict(GroupSpec::dihedral(3));
  CHECK(d3.kind == Verdict::Kind::RuledOut);
  CHECK(d3.reasons[0].find("recorded") != std::string::npos);
  // q > 2 goes through the period argument
  const Verdict mc = cp2cp2_verdict(GroupSpec::metacyclic(7, 3, 2));
  CHECK(mc.kind == Verdict::Kind::RuledOut);
  CHECK(mc.reasons[0].find("case 1") != std::string::npos);
  // the reduction step needs minimal nonabelian input
  CHECK_THROWS_AS(cp2cp2_verdict(GroupSpec::cyclic(6)), std::invalid_argument);
  CHECK_THROWS_AS(cp2cp2_verdict(GroupSpec::dihedral(6)), std::invalid_argument);
}
