#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eqco/catalog.hpp>
#include <eqco/groups.hpp>
#include <eqco/specparse.hpp>

#include <map>
#include <set>

using namespace eqco::groups;
using eqco::exactalg::FgAbelianGroup;

namespace {

FiniteGroup S3() { return build_group(GroupSpec::dihedral(3)); }

// brute-force subgroup oracle: test every subset closed under op and inverse
std::set<std::vector<int>> subgroup_oracle(const FiniteGroup& g) {
  const int n = static_cast<int>(g.order());
  REQUIRE(n <= 12);  // 2^n subsets
  std::set<std::vector<int>> subs;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    if (!(mask >> g.identity() & 1)) continue;
    bool closed = true;
    for (int x = 0; x < n && closed; ++x) {
      if (!(mask >> x & 1)) continue;
      if (!(mask >> g.inv(x) & 1)) closed = false;
      for (int y = 0; y < n && closed; ++y)
        if (mask >> y & 1) closed = (mask >> g.op(x, y)) & 1;
    }
    if (!closed) continue;
    std::vector<int> v;
    for (int x = 0; x < n; ++x)
      if (mask >> x & 1) v.push_back(x);
    subs.insert(v);
  }
  return subs;
}

}  // namespace

TEST_CASE("build_group: cyclic and quaternion basics") {
  FiniteGroup c6 = build_group(GroupSpec::cyclic(6));
  CHECK(c6.order() == 6);
  CHECK(c6.is_abelian());

  FiniteGroup q8 = build_group(GroupSpec::quaternion8());
  CHECK(q8.order() == 8);
  int involutions = 0;
  for (int x = 0; x < 8; ++x)
    if (q8.element_order(x) == 2) ++involutions;
  CHECK(involutions == 1);
  // a^4 = 1, a^2 = b^2, b^-1 a b = a^-1
  int a = q8.generator("a"), b = q8.generator("b");
  CHECK(q8.power(a, 4) == q8.identity());
  CHECK(q8.op(a, a) == q8.op(b, b));
  CHECK(q8.op(q8.op(q8.inv(b), a), b) == q8.inv(a));
}

TEST_CASE("build_group: dicyclic MC(3,4,2) has order 12 and center of order 2") {
  FiniteGroup g = build_group(GroupSpec::metacyclic(3, 4, 2));
  CHECK(g.order() == 12);
  CHECK(g.center().size() == 2);
  CHECK(!g.is_abelian());
}

TEST_CASE("build_group: relations hold in every family instance") {
  // metacyclic relation b^-1 a b = a^k
  for (auto [m, n, k] : {std::tuple<long, long, long>{7, 3, 2}, {5, 4, 3}, {3, 4, 2}, {6, 2, 5}}) {
    FiniteGroup g = build_group(GroupSpec::metacyclic(m, n, k));
    CHECK(g.order() == m * n);
    int a = g.generator("a"), b = g.generator("b");
    CHECK(g.power(a, m) == g.identity());
    CHECK(g.power(b, n) == g.identity());
    CHECK(g.op(g.op(g.inv(b), a), b) == g.power(a, k));
  }
  // G1 relation [a,b] = a^{p^{m-1}}
  for (auto [m, n, p] : {std::tuple<long, long, long>{2, 1, 2}, {2, 1, 3}, {2, 2, 2}}) {
    FiniteGroup g = build_group(GroupSpec::g1(m, n, p));
    CHECK(g.order() == detail::ipow(p, m + n));
    int a = g.generator("a"), b = g.generator("b");
    int comm = g.op(g.op(g.inv(a), g.inv(b)), g.op(a, b));
    CHECK(comm == g.power(a, detail::ipow(p, m - 1)));
  }
  // G2 relations [a,b] = c, c central, c^p = 1
  for (auto [m, n, p] : {std::tuple<long, long, long>{1, 1, 2}, {1, 1, 3}, {2, 1, 2}}) {
    FiniteGroup g = build_group(GroupSpec::g2(m, n, p));
    CHECK(g.order() == detail::ipow(p, m + n + 1));
    int a = g.generator("a"), b = g.generator("b"), c = g.generator("c");
    CHECK(g.op(g.op(g.inv(a), g.inv(b)), g.op(a, b)) == c);
    CHECK(g.power(c, p) == g.identity());
    for (int x = 0; x < g.order(); ++x) CHECK(g.op(c, x) == g.op(x, c));
  }
  // EPQ relation b v b^-1 = A v on basis vectors
  FiniteGroup a4 = build_group(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}));
  CHECK(a4.order() == 12);
  int b = a4.generator("b");
  int a1 = a4.generator("a1"), a2 = a4.generator("a2");
  // A e1 = (0,1) = a2 ; A e2 = (1,1) = a1 a2
  CHECK(a4.op(a4.op(b, a1), a4.inv(b)) == a2);
  CHECK(a4.op(a4.op(b, a2), a4.inv(b)) == a4.op(a1, a2));
}

TEST_CASE("build_group: invalid specs rejected") {
  CHECK_THROWS(build_group(GroupSpec::metacyclic(7, 3, 3)));  // 3^3 = 27 != 1 mod 7
  CHECK_THROWS(build_group(GroupSpec::metacyclic(6, 2, 2)));  // k not a unit
  CHECK_THROWS(build_group(GroupSpec::elementary_abelian(4, 2)));
  CHECK_THROWS(build_group(GroupSpec::g1(1, 1, 2)));  // needs m >= 2
  CHECK_THROWS(build_group(GroupSpec::epq(2, 2, 3, 1, {{1, 1}, {0, 1}})));  // A^3 != I
}

TEST_CASE("all_subgroups: pinned counts and oracle agreement") {
  FiniteGroup q8 = build_group(GroupSpec::quaternion8());
  auto subs = all_subgroups(q8);
  CHECK(subs.size() == 6);
  std::multiset<size_t> sizes;
  for (auto& h : subs) sizes.insert(h.size());
  CHECK(sizes == std::multiset<size_t>{1, 2, 4, 4, 4, 8});

  CHECK(all_subgroups(build_group(GroupSpec::cyclic(7))).size() == 2);
  CHECK(all_subgroups(S3()).size() == 6);

  // oracle agreement on several small groups
  for (auto spec : {GroupSpec::quaternion8(), GroupSpec::dihedral(3), GroupSpec::cyclic(12),
                    GroupSpec::metacyclic(3, 4, 2), GroupSpec::dihedral(4)}) {
    FiniteGroup g = build_group(spec);
    auto fast = all_subgroups(g);
    auto oracle = subgroup_oracle(g);
    CHECK(std::set<std::vector<int>>(fast.begin(), fast.end()) == oracle);
  }
}

TEST_CASE("Lagrange: subgroup orders divide group order") {
  for (auto& e : eqco::catalog::load_catalog()) {
    FiniteGroup g = build_group(e.spec);
    for (auto& h : all_subgroups(g)) CHECK(g.order() % h.size() == 0);
  }
}

TEST_CASE("elementary_abelian_rank") {
  CHECK(elementary_abelian_rank(build_group(GroupSpec::quaternion8())) == 1);
  CHECK(elementary_abelian_rank(build_group(GroupSpec::g1(2, 1, 2))) == 2);  // D4
  CHECK(elementary_abelian_rank(build_group(GroupSpec::elementary_abelian(2, 3))) == 3);
  CHECK(elementary_abelian_rank(build_group(GroupSpec::cyclic(12))) == 1);
  CHECK(elementary_abelian_rank(build_group(GroupSpec::dihedral(5))) == 1);
  CHECK(elementary_abelian_rank(build_group(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}))) == 2);
}

TEST_CASE("is_minimal_nonabelian") {
  CHECK(is_minimal_nonabelian(S3()));
  CHECK(!is_minimal_nonabelian(build_group(GroupSpec::dihedral(6))));  // contains S3
  CHECK(!is_minimal_nonabelian(build_group(GroupSpec::cyclic(12))));
  CHECK(is_minimal_nonabelian(build_group(GroupSpec::quaternion8())));
}

TEST_CASE("abelian structure and abelianization") {
  FiniteGroup g = build_group(GroupSpec::direct_product(
      {GroupSpec::cyclic(4), GroupSpec::cyclic(2), GroupSpec::cyclic(3)}));
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  CHECK(abelian_structure(g, all) == FgAbelianGroup::make(0, {2, 12}));

  CHECK(abelianization(S3()) == FgAbelianGroup::cyclic(2));
  CHECK(abelianization(build_group(GroupSpec::quaternion8())) == FgAbelianGroup::make(0, {2, 2}));
  CHECK(abelianization(build_group(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}))) ==
        FgAbelianGroup::cyclic(3));  // A4
  CHECK(abelianization(build_group(GroupSpec::cyclic(9))) == FgAbelianGroup::cyclic(9));
}

TEST_CASE("classify_minimal_nonabelian: tagged examples") {
  using Tag = MinimalNonabelianClass::Tag;
  auto a4 = classify_minimal_nonabelian(build_group(GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}})));
  CHECK(a4.tag == Tag::SemidirectEPQ);
  CHECK(a4.p == 2);
  CHECK(a4.r == 2);
  CHECK(a4.q == 3);
  CHECK(a4.n == 1);

  CHECK(classify_minimal_nonabelian(build_group(GroupSpec::quaternion8())).tag == Tag::Quaternion);

  auto t1 = classify_minimal_nonabelian(build_group(GroupSpec::g1(2, 1, 3)));
  CHECK(t1.tag == Tag::PGroupType1);
  CHECK(t1.m == 2);
  CHECK(t1.n == 1);
  CHECK(t1.p == 3);

  CHECK(classify_minimal_nonabelian(build_group(GroupSpec::cyclic(12))).tag == Tag::Abelian);
  CHECK(classify_minimal_nonabelian(build_group(GroupSpec::dihedral(6))).tag ==
        Tag::NotMinimalNonabelian);

  // round trip: classify(build(F)) recovers F for in-scope parameters
  auto t2 = classify_minimal_nonabelian(build_group(GroupSpec::g2(1, 1, 3)));
  CHECK(t2.tag == Tag::PGroupType2);
  CHECK(t2.m == 1);
  CHECK(t2.n == 1);
  CHECK(t2.p == 3);
  auto mc = classify_minimal_nonabelian(build_group(GroupSpec::metacyclic(5, 2, 4)));
  CHECK(mc.tag == Tag::SemidirectEPQ);
  CHECK(mc.p == 5);
  CHECK(mc.r == 1);
  CHECK(mc.q == 2);
  CHECK(mc.n == 1);
}

TEST_CASE("classification census over the order <= 15 catalog") {
  using Tag = MinimalNonabelianClass::Tag;
  std::set<std::string> minimal;
  for (auto& e : eqco::catalog::load_catalog()) {
    FiniteGroup g = build_group(e.spec);
    bool mna = !g.is_abelian() && is_minimal_nonabelian(g);
    auto cls = classify_minimal_nonabelian(g);
    bool family_tag = cls.tag == Tag::PGroupType1 || cls.tag == Tag::PGroupType2 ||
                      cls.tag == Tag::Quaternion || cls.tag == Tag::SemidirectEPQ;
    CHECK(mna == family_tag);
    if (mna) minimal.insert(e.name);
  }
  CHECK(minimal == std::set<std::string>{"S3", "D4", "Q8", "D5", "A4", "Dic3", "D7"});
}

TEST_CASE("catalog: 28 pairwise distinct isomorphism types of order <= 15") {
  auto cat = eqco::catalog::load_catalog();
  CHECK(cat.size() == 28);
  std::vector<Fingerprint> fps;
  std::map<long, int> by_order;
  for (auto& e : cat) {
    FiniteGroup g = build_group(e.spec);
    CHECK(g.order() <= 15);
    ++by_order[g.order()];
    Fingerprint f = fingerprint(g);
    for (auto& other : fps) CHECK(!(f == other));
    fps.push_back(std::move(f));
  }
  // known counts of isomorphism types per order
  std::map<long, int> expected{{1, 1}, {2, 1},  {3, 1}, {4, 2},  {5, 1},
                               {6, 2}, {7, 1},  {8, 5}, {9, 2},  {10, 2},
                               {11, 1}, {12, 5}, {13, 1}, {14, 2}, {15, 1}};
  CHECK(by_order == expected);
}

TEST_CASE("exponent lemma: Z_4 case is vacuous for q = 3 and search is empty") {
  // Aut(Z_4) = Z_2: no order-3 automorphisms exist at all
  auto ce = exponent_lemma_search(4, {3});
  CHECK(ce.empty());
  // small but non-vacuous instances
  CHECK(exponent_lemma_search(32, {2, 3, 5, 7}).empty());
}

TEST_CASE("exponent lemma: brute-force endomorphism oracle agrees on |K| <= 32") {
  // enumerate *all* automorphisms of small abelian p-groups with exponent > p
  // and verify none satisfies the hypothesis, matching the pruned search
  for (auto [p, lam] : std::vector<std::pair<long, std::vector<int>>>{
           {2, {2}}, {2, {2, 1}}, {2, {2, 2}}, {2, {3, 1}}, {2, {2, 1, 1}},
           {3, {2}}, {3, {2, 1}}, {5, {2}}}) {
    detail::AbelianPGroup k(p, lam);
    const long n = k.size();
    REQUIRE(n <= 32);
    // generator-image tuples over the whole group (brute force)
    size_t ngen = lam.size();
    std::vector<long> pick(ngen, 0);
    int found = 0;
    for (;;) {
      // pick defines a homomorphism only if p^{lam_i} * img_i = 0
      bool ok = true;
      for (size_t i = 0; i < ngen && ok; ++i)
        ok = k.element_order(pick[i]) <= detail::ipow(p, lam[i]) &&
             detail::ipow(p, lam[i]) % k.element_order(pick[i]) == 0;
      std::vector<long> sigma(n);
      for (long x = 0; x < n && ok; ++x) sigma[x] = detail::apply_endo(k, pick, x);
      std::vector<char> hit(n, 0);
      for (long x = 0; x < n && ok; ++x) {
        if (hit[sigma[x]]) ok = false;
        hit[sigma[x]] = 1;
      }
      if (ok) {
        // automorphism; check prime order q != p and hypothesis
        long o = 1;
        std::vector<long> acc = sigma;
        while (true) {
          bool is_id = true;
          for (long x = 0; x < n; ++x)
            if (acc[x] != x) {
              is_id = false;
              break;
            }
          if (is_id) break;
          for (long x = 0; x < n; ++x) acc[x] = sigma[acc[x]];
          ++o;
        }
        if (o != 1 && o % p != 0 && detail::is_prime(o) && detail::hypothesis_holds(k, sigma))
          ++found;  // would be a counterexample (exponent > p by construction)
      }
      size_t t = 0;
      while (t < ngen && ++pick[t] == n) pick[t++] = 0;
      if (t == ngen) break;
    }
    CHECK(found == 0);
  }
}

TEST_CASE("aut-order sanity for (Z_p)^2") {
  // count invertible 2x2 matrices over F_p and their order-q elements
  for (long p : {2, 3}) {
    long total = 0;
    std::map<long, long> order_count;
    for (long a = 0; a < p; ++a)
      for (long b = 0; b < p; ++b)
        for (long c = 0; c < p; ++c)
          for (long d = 0; d < p; ++d) {
            if (((a * d - b * c) % p + p) % p == 0) continue;
            ++total;
            // order of the matrix
            long m[4] = {a, b, c, d}, acc[4] = {a, b, c, d};
            long o = 1;
            while (!(acc[0] == 1 && acc[1] == 0 && acc[2] == 0 && acc[3] == 1)) {
              long nx[4] = {(acc[0] * m[0] + acc[1] * m[2]) % p, (acc[0] * m[1] + acc[1] * m[3]) % p,
                            (acc[2] * m[0] + acc[3] * m[2]) % p, (acc[2] * m[1] + acc[3] * m[3]) % p};
              std::copy(nx, nx + 4, acc);
              ++o;
            }
            ++order_count[o];
          }
    CHECK(total == (p * p - 1) * (p * p - p));
    // Frobenius/Sylow consistency: for prime q | |Aut|, #order-q = -1 mod q
    for (long q : {2L, 3L}) {
      if (total % q != 0) {
        CHECK(order_count[q] == 0);
      } else {
        CHECK(order_count[q] > 0);
        CHECK((order_count[q] + 1) % q == 0);
      }
    }
  }
}

TEST_CASE("spec parsing: grammar examples and round trips") {
  using eqco::specparse::parse_group_spec;
  CHECK(parse_group_spec("C12") == GroupSpec::cyclic(12));
  CHECK(parse_group_spec("MC(7;3;2)") == GroupSpec::metacyclic(7, 3, 2));
  CHECK(parse_group_spec("D5") == GroupSpec::metacyclic(5, 2, 4));
  CHECK(parse_group_spec("Q8") == GroupSpec::quaternion8());
  CHECK(parse_group_spec(" E( 3 , 2 ) ") == GroupSpec::elementary_abelian(3, 2));
  CHECK(parse_group_spec("EPQ(2,2;3,1;[[0,1],[1,1]])") ==
        GroupSpec::epq(2, 2, 3, 1, {{0, 1}, {1, 1}}));
  CHECK(parse_group_spec("C2xC2xC3") ==
        GroupSpec::direct_product(
            {GroupSpec::cyclic(2), GroupSpec::cyclic(2), GroupSpec::cyclic(3)}));

  CHECK_THROWS_AS(parse_group_spec("MC(7;3)"), eqco::specparse::ParseError);
  CHECK_THROWS_AS(parse_group_spec("C"), eqco::specparse::ParseError);
  CHECK_THROWS_AS(parse_group_spec("C4 junk"), eqco::specparse::ParseError);

  // round trip parse(print(spec)) = spec for all catalog entries
  for (auto& e : eqco::catalog::load_catalog())
    CHECK(parse_group_spec(e.spec.to_string()) == e.spec);
}

TEST_CASE("order matches spec-declared product for every family") {
  struct Case {
    GroupSpec spec;
    long order;
  };
  for (auto& c : std::vector<Case>{{GroupSpec::cyclic(15), 15},
                                   {GroupSpec::elementary_abelian(3, 2), 9},
                                   {GroupSpec::metacyclic(7, 3, 2), 21},
                                   {GroupSpec::quaternion8(), 8},
                                   {GroupSpec::g1(2, 2, 2), 16},
                                   {GroupSpec::g2(1, 1, 5), 125},
                                   {GroupSpec::epq(3, 1, 2, 1, {{2}}), 6},
                                   {GroupSpec::direct_product(
                                        {GroupSpec::cyclic(4), GroupSpec::dihedral(3)}),
                                    24}})
    CHECK(build_group(c.spec).order() == c.order);
}
