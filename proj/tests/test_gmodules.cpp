#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eqco/gmodules.hpp>

#include <memory>

using namespace eqco::gmodules;
using namespace eqco::groups;
using eqco::exactalg::Int;
using eqco::exactalg::IntegerMatrix;

namespace {

std::shared_ptr<const FiniteGroup> make(const GroupSpec& s) {
  return std::make_shared<const FiniteGroup>(build_group(s));
}

IntegerMatrix mat(int n, std::initializer_list<long> vals) {
  IntegerMatrix m(n, n);
  auto it = vals.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = Int(*it++);
  return m;
}

}  // namespace

TEST_CASE("from_generator_action validates relations") {
  auto c4 = make(GroupSpec::cyclic(4));
  // a acts by the rotation matrix of order 4: fine
  auto m = GModule::from_generator_action(c4, {{c4->generator("a"), mat(2, {0, -1, 1, 0})}});
  CHECK(m.rank() == 2);
  CHECK(m.over_whole_group());
  // a acts by a matrix of multiplicative order 3: violates a^4 = 1
  CHECK_THROWS(GModule::from_generator_action(c4, {{c4->generator("a"), mat(2, {0, -1, 1, -1})}}));
}

TEST_CASE("coinduced: S3 over <t> gives the rank-3 coset permutation module") {
  auto s3 = make(GroupSpec::dihedral(3));
  int t = s3->generator("b");  // reflection
  std::vector<int> h{s3->identity(), t};
  std::sort(h.begin(), h.end());
  GModule m = GModule::trivial_over(s3, h, 1);
  GModule c = coinduced_module(s3, h, m);
  CHECK(c.rank() == 3);
  // every generator acts by a permutation matrix
  for (auto& [name, gen] : s3->generators()) {
    const IntegerMatrix& a = c.act(gen);
    for (int i = 0; i < 3; ++i) {
      Int row = 0, col = 0;
      for (int j = 0; j < 3; ++j) {
        CHECK(a.at(i, j) * a.at(i, j) == a.at(i, j));  // entries 0/1
        row += a.at(i, j);
        col += a.at(j, i);
      }
      CHECK(row == 1);
      CHECK(col == 1);
    }
  }
}

TEST_CASE("coinduced: over the whole group returns M itself") {
  auto q8 = make(GroupSpec::quaternion8());
  std::vector<int> all(q8->order());
  for (int i = 0; i < 8; ++i) all[i] = i;
  // left multiplication by i and j on the quaternion lattice Z<1,i,j,k>
  GModule m2 = GModule::from_generator_action(
      q8, {{q8->generator("a"), mat(4, {0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0})},
           {q8->generator("b"), mat(4, {0, 0, -1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, -1, 0, 0})}});
  GModule c = coinduced_module(q8, all, m2);
  CHECK(c.rank() == m2.rank());
  for (int e = 0; e < 8; ++e) CHECK(c.act(e) == m2.act(e));
}

TEST_CASE("coinduced: trivial subgroup gives the regular representation") {
  auto c6 = make(GroupSpec::cyclic(6));
  GModule m = GModule::trivial_over(c6, {c6->identity()}, 1);
  GModule reg = coinduced_module(c6, {c6->identity()}, m);
  CHECK(reg.rank() == 6);
  for (int e = 0; e < 6; ++e) {
    CHECK(reg.character(e) == (e == c6->identity() ? Int(6) : Int(0)));
    // permutation matrix matching the regular action oracle
    for (int i = 0; i < 6; ++i) {
      Int s = 0;
      for (int j = 0; j < 6; ++j) s += reg.act(e).at(i, j);
      CHECK(s == 1);
    }
  }
}

TEST_CASE("rank identities for coinduced and ck") {
  auto d5 = make(GroupSpec::dihedral(5));
  int t = d5->generator("b");
  std::vector<int> h{d5->identity(), t};
  std::sort(h.begin(), h.end());
  GModule triv2 = GModule::trivial_over(d5, h, 2);
  GModule c = coinduced_module(d5, h, triv2);
  CHECK(c.rank() == (10 / 2) * 2);
  GModule full = GModule::trivial(d5, 2);
  GModule ck = ck_module(d5, h, full);
  CHECK(ck.rank() == c.rank() - full.rank());
}

TEST_CASE("ck: D3 over <t> has order-3 generator of trace -1, reflection of trace 0") {
  auto d3 = make(GroupSpec::dihedral(3));
  int t = d3->generator("b");
  std::vector<int> h{d3->identity(), t};
  std::sort(h.begin(), h.end());
  GModule ck = ck_module(d3, h, GModule::trivial(d3, 1));
  CHECK(ck.rank() == 2);
  CHECK(ck.character(d3->generator("a")) == -1);
  CHECK(ck.character(d3->generator("b")) == 0);
}

TEST_CASE("ck: C2 over trivial subgroup is the sign module") {
  auto c2 = make(GroupSpec::cyclic(2));
  GModule ck = ck_module(c2, {c2->identity()}, GModule::trivial(c2, 1));
  CHECK(ck.rank() == 1);
  CHECK(ck.act(c2->generator("a")).at(0, 0) == -1);
}

TEST_CASE("ck: over the whole group is the rank-0 module") {
  auto s3 = make(GroupSpec::dihedral(3));
  std::vector<int> all(s3->order());
  for (int i = 0; i < 6; ++i) all[i] = i;
  GModule ck = ck_module(s3, all, GModule::trivial(s3, 1));
  CHECK(ck.rank() == 0);
}

TEST_CASE("character additivity: chi(coind) = chi(ck) + chi(M)") {
  for (auto spec : {GroupSpec::dihedral(3), GroupSpec::dihedral(5), GroupSpec::metacyclic(3, 4, 2)}) {
    auto g = make(spec);
    int t = g->generator("b");
    std::vector<int> h = g->generated_subgroup({t});
    GModule m = GModule::trivial(g, 1);
    GModule co = coinduced_module(g, h, m.restricted_to(h));
    GModule ck = ck_module(g, h, m);
    for (int e = 0; e < g->order(); ++e)
      CHECK(co.character(e) == ck.character(e) + m.character(e));
  }
}

TEST_CASE("twisted power datum") {
  auto t = twisted_power_module(7, 2, 3);
  CHECK(t.p == 7);
  CHECK(t.multiplier == 1);  // 2^3 = 8 = 1 mod 7
  CHECK(t.trivial_action());

  CHECK(twisted_power_module(7, 2, 0).trivial_action());
  auto u = twisted_power_module(5, 2, 1);
  CHECK(u.multiplier == 2);
  CHECK(!u.trivial_action());

  CHECK_THROWS(twisted_power_module(6, 2, 1));
  CHECK_THROWS(twisted_power_module(5, 10, 1));
}
