// Local linear models at fixed points: exact O(2)-block representations with
// rational-multiple-of-pi angles, freeness tests, induced-character
// irreducibility certificates over cyclotomic integers, and the SO(4)
// dimension constraint and orientation filter.
#pragma once

#include <eqco/exactalg.hpp>
#include <eqco/groups.hpp>

#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eqco::localrep {

using exactalg::Int;
using groups::FiniteGroup;
using groups::GroupSpec;

// ---------------------------------------------------------------------------
// Angles as rational multiples of pi, normalized into [0, 2). All
// eigenvalue-1 and determinant questions become exact integer conditions.

struct Angle {
  long num = 0;  // angle = (num / den) * pi
  long den = 1;

  Angle() = default;
  Angle(long n, long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    const long g = std::gcd(std::abs(num), den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    num %= 2 * den;
    if (num < 0) num += 2 * den;
  }

  bool is_zero() const { return num == 0; }
  bool is_pi() const { return num == den; }
  bool operator==(const Angle& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Angle& o) const { return !(*this == o); }

  Angle operator+(const Angle& o) const { return Angle(num * o.den + o.num * den, den * o.den); }
  Angle operator-(const Angle& o) const { return Angle(num * o.den - o.num * den, den * o.den); }
  Angle operator-() const { return Angle(-num, den); }

  double radians() const { return 3.14159265358979323846 * static_cast<double>(num) / den; }
};

// ---------------------------------------------------------------------------
// O(2) elements: rotation R(theta) or reflection S(theta) with matrix
// [[cos t, -sin t], [sin t, cos t]] resp. [[cos t, sin t], [sin t, -cos t]].
// Composition stays exact in the angle parameters:
//   R(a)R(b) = R(a+b), R(a)S(b) = S(a+b), S(a)R(b) = S(a-b), S(a)S(b) = R(a-b).

struct O2Element {
  bool reflect = false;
  Angle theta;

  static O2Element rotation(Angle a) { return {false, a}; }
  static O2Element reflection(Angle a) { return {true, a}; }

  long det() const { return reflect ? -1 : 1; }
  bool is_identity() const { return !reflect && theta.is_zero(); }
  // fixed subspace dimension within the 2-plane: rotations fix nothing unless
  // trivial; every reflection fixes its axis
  int fixed_dim() const {
    if (reflect) return 1;
    return theta.is_zero() ? 2 : 0;
  }

  O2Element operator*(const O2Element& o) const {  // this after o
    if (!reflect) return {o.reflect, theta + o.theta};
    return {!o.reflect, theta - o.theta};
  }
  bool operator==(const O2Element& o) const { return reflect == o.reflect && theta == o.theta; }
};

// ---------------------------------------------------------------------------
// Monomial orthogonal maps of R^4 = plane_1 + plane_2: block-diagonal, or
// plane-swapping with a 2x2 factor each way. Closed under composition, and
// exactly the shapes the paper's local forms take.

struct Monomial4 {
  bool swap = false;
  // if !swap: v -> (b1 v1, b2 v2); if swap: v -> (b1 v2, b2 v1)
  O2Element b1, b2;

  static Monomial4 identity() { return {}; }
  static Monomial4 diagonal(O2Element x, O2Element y) { return {false, x, y}; }
  static Monomial4 swapping(O2Element x, O2Element y) { return {true, x, y}; }

  long det() const { return b1.det() * b2.det(); }  // a plane swap is even in R^4
  bool is_identity() const { return !swap && b1.is_identity() && b2.is_identity(); }

  Monomial4 operator*(const Monomial4& o) const {  // this after o
    Monomial4 z;
    z.swap = swap != o.swap;
    if (!swap) {
      z.b1 = b1 * o.b1;
      z.b2 = b2 * o.b2;
    } else {
      z.b1 = b1 * o.b2;
      z.b2 = b2 * o.b1;
    }
    return z;
  }
  bool operator==(const Monomial4& o) const {
    return swap == o.swap && b1 == o.b1 && b2 == o.b2;
  }

  // dimension of the +1 eigenspace, exactly
  int fixed_dim() const {
    if (!swap) return b1.fixed_dim() + b2.fixed_dim();
    // (v1, v2) fixed iff v1 = b1 v2 and v2 = b2 v1, i.e. v1 in Fix(b1 b2)
    return (b1 * b2).fixed_dim();
  }
};

// ---------------------------------------------------------------------------
// A 4-dimensional local representation: one Monomial4 per group element,
// generated from generator images with the relations verified exactly and
// every image orientation-preserving.

class LocalRep {
 public:
  static LocalRep from_generators(std::shared_ptr<const FiniteGroup> g,
                                  const std::vector<std::pair<int, Monomial4>>& gens) {
    LocalRep rep;
    rep.g_ = std::move(g);
    const int n = rep.g_->order();
    rep.images_.assign(n, Monomial4::identity());
    std::vector<char> known(n, 0);
    known[rep.g_->identity()] = 1;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& [x, mx] : gens)
        for (int y = 0; y < n; ++y) {
          if (!known[y]) continue;
          const int xy = rep.g_->op(x, y);
          if (known[xy]) continue;
          rep.images_[xy] = mx * rep.images_[y];
          known[xy] = 1;
          grew = true;
        }
    }
    for (int y = 0; y < n; ++y)
      if (!known[y]) throw std::invalid_argument("generators do not generate the group");
    for (const auto& [x, mx] : gens)
      if (!(rep.images_[x] == mx))
        throw std::invalid_argument("generator images violate the group relations");
    // exact relation check: the assignment is a homomorphism
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (!(rep.images_[rep.g_->op(x, y)] == rep.images_[x] * rep.images_[y]))
          throw std::invalid_argument("generator images violate the group relations");
    for (int x = 0; x < n; ++x)
      if (rep.images_[x].det() != 1)
        throw std::invalid_argument("representation must preserve orientation on R^4");
    return rep;
  }

  const FiniteGroup& group() const { return *g_; }
  const Monomial4& image(int x) const { return images_[x]; }

  bool faithful() const {
    const int n = g_->order();
    for (int x = 0; x < n; ++x)
      if (x != g_->identity() && images_[x].is_identity()) return false;
    return true;
  }

  // conjugation by the block-preserving rotation diag(R(alpha), R(beta))
  LocalRep conjugated(Angle alpha, Angle beta) const {
    LocalRep rep = *this;
    const O2Element ra = O2Element::rotation(alpha), rb = O2Element::rotation(beta);
    const O2Element rai = O2Element::rotation(-alpha), rbi = O2Element::rotation(-beta);
    for (Monomial4& m : rep.images_) {
      if (!m.swap) {
        m.b1 = ra * m.b1 * rai;
        m.b2 = rb * m.b2 * rbi;
      } else {
        m.b1 = ra * m.b1 * rbi;
        m.b2 = rb * m.b2 * rai;
      }
    }
    return rep;
  }

 private:
  std::shared_ptr<const FiniteGroup> g_;
  std::vector<Monomial4> images_;
};

// True iff no non-identity element has +1 as an eigenvalue.
inline bool is_free_representation(const LocalRep& rep) {
  if (!rep.faithful()) throw std::invalid_argument("freeness requires a faithful representation");
  const int n = rep.group().order();
  for (int x = 0; x < n; ++x) {
    if (x == rep.group().identity()) continue;
    if (rep.image(x).fixed_dim() > 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Cyclotomic integers Z[zeta_N], stored in the power basis of
// Z[x]/(x^N - 1); equality with a Z[zeta_N] value is decided by exact
// reduction modulo the N-th cyclotomic polynomial. No floating point.

namespace detail {

// Phi_n, exactly: divide x^n - 1 by the Phi_d for proper divisors d | n.
inline std::vector<Int> cyclotomic_polynomial(long n) {
  static std::map<long, std::vector<Int>> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<Int> poly(n + 1);
  poly[0] = -1;
  poly[n] = 1;  // x^n - 1
  for (long d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const std::vector<Int> phi = cyclotomic_polynomial(d);
    // exact division by the monic phi
    std::vector<Int> quot(poly.size() - phi.size() + 1);
    std::vector<Int> rem = poly;
    for (long i = static_cast<long>(quot.size()) - 1; i >= 0; --i) {
      quot[i] = rem[i + phi.size() - 1];
      for (size_t t = 0; t < phi.size(); ++t) rem[i + t] -= quot[i] * phi[t];
    }
    for (const Int& r : rem)
      if (r != 0) throw std::logic_error("cyclotomic division is not exact");
    poly = std::move(quot);
  }
  memo[n] = poly;
  return poly;
}

}  // namespace detail

class CyclotomicInteger {
 public:
  explicit CyclotomicInteger(long level) : n_(level), c_(level) {
    if (level < 1) throw std::invalid_argument("level must be positive");
  }
  static CyclotomicInteger root_power(long level, long t) {
    CyclotomicInteger z(level);
    z.c_[((t % level) + level) % level] = 1;
    return z;
  }
  static CyclotomicInteger integer(long level, const Int& v) {
    CyclotomicInteger z(level);
    z.c_[0] = v;
    return z;
  }

  long level() const { return n_; }
  void add_root_power(long t, const Int& coeff) {
    c_[((t % n_) + n_) % n_] += coeff;
  }

  CyclotomicInteger operator+(const CyclotomicInteger& o) const {
    check(o);
    CyclotomicInteger z(n_);
    for (long i = 0; i < n_; ++i) z.c_[i] = c_[i] + o.c_[i];
    return z;
  }
  CyclotomicInteger operator-(const CyclotomicInteger& o) const {
    check(o);
    CyclotomicInteger z(n_);
    for (long i = 0; i < n_; ++i) z.c_[i] = c_[i] - o.c_[i];
    return z;
  }
  CyclotomicInteger operator*(const CyclotomicInteger& o) const {
    check(o);
    CyclotomicInteger z(n_);
    for (long i = 0; i < n_; ++i) {
      if (c_[i] == 0) continue;
      for (long j = 0; j < n_; ++j) {
        if (o.c_[j] == 0) continue;
        z.c_[(i + j) % n_] += c_[i] * o.c_[j];
      }
    }
    return z;
  }
  CyclotomicInteger conj() const {  // zeta -> zeta^{-1}
    CyclotomicInteger z(n_);
    for (long i = 0; i < n_; ++i) z.c_[(n_ - i) % n_] = c_[i];
    return z;
  }

  // zero as an element of Z[zeta_N], i.e. divisible by Phi_N
  bool is_zero() const {
    const std::vector<Int> phi = detail::cyclotomic_polynomial(n_);
    std::vector<Int> rem = c_;
    rem.resize(std::max(c_.size(), phi.size()));
    for (long i = static_cast<long>(rem.size() - phi.size()); i >= 0; --i) {
      const Int lead = rem[i + phi.size() - 1];
      if (lead == 0) continue;
      for (size_t t = 0; t < phi.size(); ++t) rem[i + t] -= lead * phi[t];
    }
    for (const Int& r : rem)
      if (r != 0) return false;
    return true;
  }
  bool operator==(const CyclotomicInteger& o) const { return (*this - o).is_zero(); }

 private:
  void check(const CyclotomicInteger& o) const {
    if (n_ != o.n_) throw std::invalid_argument("cyclotomic level mismatch");
  }
  long n_;
  std::vector<Int> c_;
};

// ---------------------------------------------------------------------------
// Induced characters and the faithful-irreducible dimension (Lemma 5.1).

struct InducedCharacter {
  long dimension = 0;  // = [G : G0]
  long level = 1;      // cyclotomic level N = exponent of G
  long g0_order = 0;
  std::vector<int> g0_elements;            // the cyclic subgroup inducing from
  std::vector<CyclotomicInteger> values;   // one per group element
};

namespace detail {

inline long group_exponent(const FiniteGroup& g) {
  long e = 1;
  for (int x = 0; x < g.order(); ++x) e = std::lcm(e, g.element_order(x));
  return e;
}

}  // namespace detail

// Induce a faithful character from the cyclic subgroup G0 = <a, b^q> (order
// p n / q for the metacyclic family; the order-4 subgroup for Q8), then
// certify exactly: the character vanishes off the conjugates of G0, its norm
// <chi, chi> is 1, and only the identity attains the full dimension.
inline InducedCharacter induced_faithful_character(const GroupSpec& spec) {
  const FiniteGroup g = groups::build_group(spec);
  if (g.is_abelian()) throw std::invalid_argument("group is abelian");
  long g0_order = 0;
  if (spec.family == GroupSpec::Family::Quaternion8) {
    g0_order = 4;
  } else if (spec.family == GroupSpec::Family::Metacyclic) {
    const long p = spec.m, n = spec.n;
    if (!groups::detail::is_prime(p) || std::gcd(p, n) != 1)
      throw std::invalid_argument("requires Z_p x| Z_n with p prime, gcd(p, n) = 1");
    long q = 1, acc = ((spec.k % p) + p) % p;
    while (acc != 1) {
      acc = acc * (spec.k % p) % p;
      ++q;
    }
    g0_order = p * (n / q);
  } else {
    throw std::invalid_argument("faithful-irreducible dimension needs metacyclic or Q8");
  }
  // G0 = the cyclic subgroup generated by any element of that order
  int x0 = -1;
  for (int x = 0; x < g.order(); ++x)
    if (g.element_order(x) == g0_order) {
      x0 = x;
      break;
    }
  if (x0 < 0) throw std::logic_error("no cyclic subgroup of the expected order");
  std::vector<int> g0(g0_order);
  std::map<int, long> logm;  // element -> discrete log base x0
  int cur = g.identity();
  for (long t = 0; t < g0_order; ++t) {
    g0[t] = cur;
    logm[cur] = t;
    cur = g.op(x0, cur);
  }
  const long N = detail::group_exponent(g);
  if (N % g0_order != 0) throw std::logic_error("exponent not divisible by |G0|");
  const long scale = N / g0_order;  // chi(x0^t) = zeta_N^{t scale}

  InducedCharacter out;
  out.dimension = g.order() / static_cast<long>(g0_order);
  out.level = N;
  out.g0_order = g0_order;
  out.g0_elements = g0;
  // chi_ind(x) = (1/|G0|) sum_{g in G} chi0(g x g^{-1})
  std::vector<long> inv(g.order());
  for (int x = 0; x < g.order(); ++x) inv[x] = g.inv(x);
  for (int x = 0; x < g.order(); ++x) {
    std::vector<Int> counts(g0_order);
    for (int h = 0; h < g.order(); ++h) {
      const int conj = g.op(g.op(h, x), static_cast<int>(inv[h]));
      auto it = logm.find(conj);
      if (it != logm.end()) counts[it->second] += 1;
    }
    CyclotomicInteger v(N);
    for (long t = 0; t < g0_order; ++t) {
      if (counts[t] == 0) continue;
      if (counts[t] % g0_order != 0)
        throw std::logic_error("induced character coefficient is not integral");
      v.add_root_power(t * scale, counts[t] / g0_order);
    }
    out.values.push_back(std::move(v));
  }
  // certification: <chi, chi> = 1, exactly
  CyclotomicInteger norm(N);
  for (int x = 0; x < g.order(); ++x) norm = norm + out.values[x] * out.values[x].conj();
  if (!(norm == CyclotomicInteger::integer(N, g.order())))
    throw std::logic_error("induced character is not irreducible");
  // certification: faithful (only the identity attains the dimension)
  for (int x = 0; x < g.order(); ++x) {
    const bool full = out.values[x] == CyclotomicInteger::integer(N, out.dimension);
    if (full != (x == g.identity()))
      throw std::logic_error("induced character is not faithful");
  }
  return out;
}

// The common complex dimension of faithful irreducibles: 1 for abelian
// groups, q for nonabelian Z_p x| Z_{q^n} (and 2 for Q8), certified by the
// exact character-norm computation above.
inline long faithful_irrep_dimension(const GroupSpec& spec) {
  if (groups::build_group(spec).is_abelian()) return 1;
  return induced_faithful_character(spec).dimension;
}

// ---------------------------------------------------------------------------
// Lemma 5.1: if G = Z_p x| Z_{q^n} embeds in SO(4), then q = 2.

struct So4Verdict {
  bool satisfied = false;
  long dimension = 0;  // faithful irreducible complex dimension (abelian: 1)
  std::string note;
};

inline So4Verdict so4_dimension_constraint(const GroupSpec& spec) {
  So4Verdict v;
  const FiniteGroup g = groups::build_group(spec);
  if (g.is_abelian()) {
    v.dimension = 1;
    const long rank = groups::abelianization(g).invariant_factors().size();
    v.satisfied = rank <= 2;
    v.note = v.satisfied ? "abelian of rank <= 2: embeds in the maximal torus of SO(4)"
                         : "abelian of rank >= 3: no rank-3 torus in SO(4)";
    return v;
  }
  v.dimension = faithful_irrep_dimension(spec);
  v.satisfied = v.dimension <= 2;
  if (v.dimension == 3)
    v.note =
        "a dimension-3 faithful summand would force a real 3-dimensional representation, "
        "but Z_p x| Z_{3^n} is not among the finite subgroups of O(3)";
  else if (!v.satisfied)
    v.note = "faithful irreducibles have dimension > 2: C^4 cannot contain one";
  else
    v.note = "faithful irreducibles have dimension <= 2";
  return v;
}

// ---------------------------------------------------------------------------
// The orientation / normal-form filter (Prop. 2.5 plus the D_p fixed-set
// rule).

struct FilterResult {
  bool admissible = false;
  std::string reason;
};

inline FilterResult local_rep_filter(const LocalRep& rep,
                                     const std::vector<int>& singular_planes) {
  for (int plane : singular_planes)
    if (plane != 0 && plane != 1)
      throw std::invalid_argument("singular planes are the coordinate planes 0 and 1");
  const int n = rep.group().order();
  for (int x = 0; x < n; ++x) {
    if (x == rep.group().identity()) continue;
    const Monomial4& m = rep.image(x);
    if (!m.swap) {
      for (int plane : singular_planes) {
        const O2Element& b = plane == 0 ? m.b1 : m.b2;
        if (b.det() == -1)
          return {false, "an element reverses orientation on a singular 2-plane"};
      }
    }
    if (rep.group().element_order(x) % 2 == 1 && m.fixed_dim() >= 2)
      return {false, "an odd-order element has a 2-dimensional fixed set at the fixed point"};
  }
  return {true, "orientation preserved on singular planes; no odd-order element fixes a 2-plane"};
}

}  // namespace eqco::localrep
