// Combinatorial models of singular sets: isolated-point/2-sphere profiles,
// the D_p flower CW complexes, fiber coefficient assembly for the Borel
// pages, Lefschetz and Edmonds constraints, and the Sigma_0 sphere cycle.
#pragma once

#include <eqco/borel.hpp>
#include <eqco/cohomology.hpp>
#include <eqco/exactalg.hpp>
#include <eqco/groups.hpp>

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqco::singular {

using exactalg::FgAbelianGroup;
using exactalg::Int;
using groups::GroupSpec;

// ---------------------------------------------------------------------------
// Profiles. Counts are orbit counts (pairs / s-orbits), matching the
// coinduced-module exponents of the fiber rows; per-object counts would
// double-count Shapiro summands.

struct SingularProfile {
  enum class Family {
    Rank1Trivial,  // n1 fixed points + n2 invariant spheres, trivial action
    TwistedOrbits,  // Z_p x| Z_q, q > 2: m free-orbit point classes plus n1
                    // points and n2 spheres fixed by b in free Z_p-orbits
    Dihedral,       // D_p flowers + swapped pairs + s-orbits
  };

  Family family = Family::Rank1Trivial;
  long n1 = 0, n2 = 0;

  // TwistedOrbits only: number of free-orbit point classes, m = (b2+2)/q.
  long m = 0;

  // Dihedral only: flower intersection counts (one entry per flower; n1 =
  // mi.size()), plus t-orbit and s-orbit counts.
  std::vector<long> mi;
  long n3 = 0, n4 = 0, n5 = 0;

  static SingularProfile rank1(long n1, long n2) {
    SingularProfile p;
    p.family = Family::Rank1Trivial;
    p.n1 = n1;
    p.n2 = n2;
    p.validate();
    return p;
  }
  static SingularProfile twisted_orbits(long m, long n1, long n2) {
    SingularProfile p;
    p.family = Family::TwistedOrbits;
    p.m = m;
    p.n1 = n1;
    p.n2 = n2;
    p.validate();
    return p;
  }
  static SingularProfile dihedral(std::vector<long> mi, long n2, long n3, long n4, long n5) {
    SingularProfile p;
    p.family = Family::Dihedral;
    p.mi = std::move(mi);
    p.n1 = static_cast<long>(p.mi.size());
    p.n2 = n2;
    p.n3 = n3;
    p.n4 = n4;
    p.n5 = n5;
    p.validate();
    return p;
  }

  bool empty() const {
    return n1 == 0 && n2 == 0 && m == 0 && mi.empty() && n3 == 0 && n4 == 0 && n5 == 0;
  }

  void validate() const {
    if (n1 < 0 || n2 < 0 || m < 0 || n3 < 0 || n4 < 0 || n5 < 0)
      throw std::invalid_argument("profile counts must be nonnegative");
    for (long v : mi)
      if (v < 1) throw std::invalid_argument("every flower needs at least one fixed point");
  }

  std::string to_json() const {
    std::ostringstream os;
    os << "{\"family\": \"";
    switch (family) {
      case Family::Rank1Trivial: os << "rank1"; break;
      case Family::TwistedOrbits: os << "twisted-orbits"; break;
      case Family::Dihedral: os << "dihedral"; break;
    }
    os << "\", \"n\": [" << n1 << ", " << n2;
    if (family == Family::Dihedral) os << ", " << n3 << ", " << n4 << ", " << n5;
    os << "]";
    if (family == Family::TwistedOrbits) os << ", \"m\": [" << m << "]";
    if (family == Family::Dihedral) {
      os << ", \"m\": [";
      for (size_t t = 0; t < mi.size(); ++t) os << (t ? ", " : "") << mi[t];
      os << "]";
    }
    os << "}";
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// The D_p flower: p 2-spheres meeting in m >= 1 global fixed points, with the
// equivariant CW structure fixed as: fixed points first, then 1-cells per
// sphere in s-power order, then one 2-cell per sphere.
//
//   0 -> Ind_<t>(Z) --0--> (Ind_<t>(Z))^{m-1} --d1--> Z^m -> 0

struct FlowerComplex {
  long p = 0;
  long m = 0;
  // underlying Z-ranks of C_0, C_1, C_2
  long c0 = 0, c1 = 0, c2 = 0;
  // underlying boundary d1 : C_1 -> C_0 (column (a, i) = e_{i+1} - e_i); d2 = 0
  exactalg::IntegerMatrix d1;

  long euler() const { return c0 - c1 + c2; }

  // Cohomology of the underlying space (forgetting the action).
  FgAbelianGroup underlying_cohomology(int d) const {
    exactalg::CochainComplexZ c(0, {c0, c1, c2});
    exactalg::SparseIntMatrix delta0(c1, c0);
    for (int i = 0; i < d1.rows(); ++i)
      for (int j = 0; j < d1.cols(); ++j) delta0.add(j, i, d1.at(i, j));
    c.set_delta(0, std::move(delta0));
    // delta_1 = (d2)^T = 0
    return exactalg::cochain_cohomology(c, d);
  }
};

inline FlowerComplex build_flower_complex(long p, long m) {
  if (!groups::detail::is_prime(p) || p == 2)
    throw std::invalid_argument("flower requires an odd prime p");
  if (m < 1) throw std::invalid_argument("flower requires m >= 1 fixed points");
  FlowerComplex x;
  x.p = p;
  x.m = m;
  x.c0 = m;
  x.c1 = p * (m - 1);
  x.c2 = p;
  x.d1 = exactalg::IntegerMatrix(static_cast<int>(m), static_cast<int>(p * (m - 1)));
  for (long a = 0; a < p; ++a)
    for (long i = 0; i + 1 < m; ++i) {
      const int col = static_cast<int>(a * (m - 1) + i);
      x.d1.at(static_cast<int>(i), col) = -1;
      x.d1.at(static_cast<int>(i + 1), col) = 1;
    }
  return x;
}

// ---------------------------------------------------------------------------
// Fiber coefficient rows for H^j(Sigma; Z), as multisets of named summands
// plus closed-form evaluators i -> H^i(G; summand) via Shapiro's lemma.

struct CoefficientSummand {
  int j = 0;                // fiber degree
  std::string description;  // e.g. "Coind_<t>(Z)" or "Ck(Z)"
  long multiplicity = 0;
  long zrank_each = 0;  // underlying Z-rank of one copy
  std::function<FgAbelianGroup(int)> cohomology;  // i -> H^i(G; one copy)
};

namespace detail {

inline std::function<FgAbelianGroup(int)> cyclic_row(long order) {
  return [order](int i) { return cohomology::detail::cyclic_cohomology_trivial_z(order, i); };
}

}  // namespace detail

// The exact multiset of fiber summands for (G, profile), per the Shapiro
// reductions of the displayed H^j(Sigma; Z).
inline std::vector<CoefficientSummand> sigma_coefficient_modules(const GroupSpec& spec,
                                                                 const SingularProfile& profile) {
  std::vector<CoefficientSummand> out;
  auto push = [&](int j, std::string desc, long mult, long zrank,
                  std::function<FgAbelianGroup(int)> h) {
    if (mult < 0) throw std::invalid_argument("negative multiplicity");
    if (mult == 0) return;
    out.push_back({j, std::move(desc), mult, zrank, std::move(h)});
  };
  switch (profile.family) {
    case SingularProfile::Family::Rank1Trivial: {
      // every point and sphere is G-invariant; trivial coefficients
      auto full = [spec](int i) { return cohomology::closed_form_cohomology(spec, i); };
      push(0, "Z", profile.n1 + profile.n2, 1, full);
      push(2, "Z", profile.n2, 1, full);
      break;
    }
    case SingularProfile::Family::TwistedOrbits: {
      if (spec.family != GroupSpec::Family::Metacyclic)
        throw std::invalid_argument("twisted-orbit profile requires a metacyclic group");
      const long p = spec.m, q = spec.n;
      if (q <= 2) throw std::invalid_argument("twisted-orbit profile requires q > 2");
      push(0, "Coind_<a>(Z)", profile.m, q, detail::cyclic_row(p));
      push(0, "Coind_<b>(Z)", profile.n1 + profile.n2, p, detail::cyclic_row(q));
      push(2, "Coind_<b>(Z)", profile.n2, p, detail::cyclic_row(q));
      break;
    }
    case SingularProfile::Family::Dihedral: {
      if (spec.family != GroupSpec::Family::Metacyclic || spec.n != 2 ||
          !groups::detail::is_prime(spec.m) || spec.m == 2)
        throw std::invalid_argument("dihedral profile requires D_p, p an odd prime");
      const long p = spec.m;
      auto full = [spec](int i) { return cohomology::closed_form_cohomology(spec, i); };
      auto ck = [spec](int i) { return cohomology::closed_form_cohomology(spec, i, true); };
      push(0, "Z", profile.n1, 1, full);
      push(0, "Coind_<s>(Z)", profile.n2 + profile.n3, 2, detail::cyclic_row(p));
      push(0, "Coind_<t>(Z)", profile.n4 + profile.n5, p, detail::cyclic_row(2));
      long ck_count = 0;
      for (long v : profile.mi) ck_count += v - 1;
      push(1, "Ck(Z)", ck_count, p - 1, ck);
      push(2, "Coind_<t>(Z)", profile.n1 + profile.n4, p, detail::cyclic_row(2));
      push(2, "Coind_<s>(Z)", profile.n2, 2, detail::cyclic_row(p));
      break;
    }
  }
  return out;
}

// Collapse the summand multiset into Borel fiber rows.
inline std::vector<borel::FiberRow> sigma_fiber_rows(const GroupSpec& spec,
                                                     const SingularProfile& profile) {
  std::vector<CoefficientSummand> summands = sigma_coefficient_modules(spec, profile);
  std::map<int, std::vector<const CoefficientSummand*>> by_j;
  for (const CoefficientSummand& s : summands) by_j[s.j].push_back(&s);
  std::vector<borel::FiberRow> rows;
  for (auto& [j, list] : by_j) {
    borel::FiberRow row;
    row.j = j;
    std::ostringstream os;
    for (size_t t = 0; t < list.size(); ++t) {
      if (t) os << " + ";
      os << list[t]->description;
      if (list[t]->multiplicity > 1) os << "^" << list[t]->multiplicity;
    }
    row.description = os.str();
    std::vector<std::pair<std::function<FgAbelianGroup(int)>, long>> parts;
    for (const CoefficientSummand* s : list) parts.emplace_back(s->cohomology, s->multiplicity);
    row.cohomology = [parts](int i) {
      FgAbelianGroup g;
      for (const auto& [h, mult] : parts) {
        FgAbelianGroup one = h(i);
        for (long t = 0; t < mult; ++t) g = g.direct_sum(one);
      }
      return g;
    };
    rows.push_back(std::move(row));
  }
  return rows;
}

// Divisibility constraint the q > 2 profile carries (emitted, not assumed:
// its failure is itself an obstruction the solver should see).
inline bool twisted_orbit_divisibility(long q, long b2) { return (b2 + 2) % q == 0; }

// ---------------------------------------------------------------------------
// Lefschetz and Edmonds constraints.

// A linear equation sum coeff_i * unknown_i = rhs in the profile unknowns.
struct LinearEquation {
  std::vector<std::pair<std::string, long>> terms;
  long rhs = 0;

  std::string to_string() const {
    std::ostringstream os;
    if (terms.empty()) os << "0";
    for (size_t t = 0; t < terms.size(); ++t) {
      if (t) os << " + ";
      if (terms[t].second != 1) os << terms[t].second << "*";
      os << terms[t].first;
    }
    os << " = " << rhs;
    return os.str();
  }
};

enum class ElementKind {
  Identity,      // chi(Fix(1)) = chi(M): the tautology b2 + 2 = b2 + 2
  Rank1Generic,  // fixed set = n1 points + n2 spheres
  DihedralS,     // s in D_p: flower fixed points + sphere pairs + point pairs
};

// chi(Fix(g)) = chi(M) = b2 + 2 for g acting trivially on homology, expanded
// in the profile unknowns.
inline LinearEquation lefschetz_constraint(ElementKind g, const SingularProfile& profile,
                                           long b2) {
  LinearEquation eq;
  eq.rhs = b2 + 2;
  switch (g) {
    case ElementKind::Identity:
      eq.terms = {{"b2+2", 1}};
      break;
    case ElementKind::Rank1Generic:
      eq.terms = {{"n1", 1}, {"n2", 2}};
      break;
    case ElementKind::DihedralS:
      if (profile.family != SingularProfile::Family::Dihedral)
        throw std::invalid_argument("s-constraint requires a dihedral profile");
      eq.terms = {{"n1", 1}, {"n2", 4}, {"n3", 2}};
      break;
  }
  return eq;
}

inline bool lefschetz_satisfied(const LinearEquation& eq, const SingularProfile& profile,
                                long b2) {
  long lhs = 0;
  for (const auto& [name, coeff] : eq.terms) {
    long v;
    if (name == "b2+2")
      v = b2 + 2;
    else if (name == "n1")
      v = profile.n1;
    else if (name == "n2")
      v = profile.n2;
    else if (name == "n3")
      v = profile.n3;
    else
      throw std::invalid_argument("unknown term " + name);
    lhs += coeff * v;
  }
  return lhs == eq.rhs;
}

// Edmonds bound: k spheres in the singular set represent independent classes,
// so k <= b2 for a mixed singular set, k <= b2 + 1 when it is purely
// 2-dimensional.
inline bool edmonds_check(long k, bool purely_two_dimensional, long b2) {
  if (k < 0 || b2 < 0) throw std::invalid_argument("negative count");
  return purely_two_dimensional ? k <= b2 + 1 : k <= b2;
}

// ---------------------------------------------------------------------------
// The Sigma_0 cycle: the singular set of the embedded Z_p x Z_p, a single
// closed loop of b2 + 2 spheres intersecting pairwise at their poles.

struct Sigma0Cycle {
  long p = 0;
  long b2 = 0;
  long sphere_count = 0;
  std::vector<std::pair<int, int>> adjacency;  // the cycle edges

  bool single_cycle() const {
    const long c = sphere_count;
    if (static_cast<long>(adjacency.size()) != c) return false;
    for (long i = 0; i < c; ++i)
      if (adjacency[i] != std::make_pair(static_cast<int>(i), static_cast<int>((i + 1) % c)))
        return false;
    return true;
  }
};

struct Sigma0Report {
  Sigma0Cycle cycle;
  bool invariance_forced = false;
  std::string argument;
};

inline Sigma0Report sigma0_cycle_model(long p, long b2, bool has_fixed_point) {
  if (!groups::detail::is_prime(p)) throw std::invalid_argument("p must be prime");
  if (!(b2 >= 3 || (b2 >= 2 && has_fixed_point)))
    throw std::domain_error(
        "exceptional case: the cycle model needs b2 >= 3, or b2 >= 2 with a fixed point "
        "(fixed-point-free exceptions exist at b2 = 1, p = 3 pseudofree and at the "
        "hyperbolic-form p = 2 case)");
  Sigma0Report rep;
  rep.cycle.p = p;
  rep.cycle.b2 = b2;
  rep.cycle.sphere_count = b2 + 2;
  for (long i = 0; i < b2 + 2; ++i)
    rep.cycle.adjacency.emplace_back(static_cast<int>(i), static_cast<int>((i + 1) % (b2 + 2)));
  rep.invariance_forced = true;
  std::ostringstream os;
  os << "adjacent spheres lie in distinct homology classes (S_i meets S_{i-1} once while "
        "S_{i+1} does not meet it), and the "
     << (b2 + 2) << " spheres represent at least " << b2
     << " distinct primitive classes generating H_2; a homologically trivial action "
        "preserving the cycle therefore cannot permute the spheres"
     << (has_fixed_point && b2 == 2 ? " (using the fixed point to pin the cycle)" : "")
     << ", so each sphere is invariant";
  rep.argument = os.str();
  return rep;
}

}  // namespace eqco::singular
