#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <eqco/exactalg.hpp>

#include <numeric>
#include <functional>
#include <random>

using namespace eqco::exactalg;

namespace {

IntegerMatrix mat(int r, int c, std::initializer_list<long> vals) {
  IntegerMatrix m(r, c);
  auto it = vals.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Int(*it++);
  return m;
}

// Independent SNF oracle via determinantal divisors: d_k = gcd of all k x k
// minors, invariant factor f_k = d_k / d_{k-1}. Exponential, small inputs only.
std::vector<Int> snf_by_minors(const IntegerMatrix& a) {
  const int n = std::min(a.rows(), a.cols());
  std::vector<Int> dd;  // dd[k-1] = gcd of k x k minors
  for (int k = 1; k <= n; ++k) {
    Int g = 0;
    std::vector<int> ri(k), ci(k);
    std::iota(ri.begin(), ri.end(), 0);
    auto next_comb = [](std::vector<int>& idx, int limit) {
      int k2 = static_cast<int>(idx.size());
      for (int i = k2 - 1; i >= 0; --i) {
        if (idx[i] < limit - (k2 - i)) {
          ++idx[i];
          for (int j = i + 1; j < k2; ++j) idx[j] = idx[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    do {
      std::iota(ci.begin(), ci.end(), 0);
      do {
        // determinant of the k x k submatrix by cofactor expansion
        std::function<Int(std::vector<int>, std::vector<int>)> det =
            [&](std::vector<int> rs, std::vector<int> cs) -> Int {
          if (rs.size() == 1) return a.at(rs[0], cs[0]);
          Int s = 0;
          for (size_t j = 0; j < cs.size(); ++j) {
            std::vector<int> rs2(rs.begin() + 1, rs.end());
            std::vector<int> cs2;
            for (size_t t = 0; t < cs.size(); ++t)
              if (t != j) cs2.push_back(cs[t]);
            Int term = a.at(rs[0], cs[j]) * det(rs2, cs2);
            s += (j % 2 == 0) ? term : -term;
          }
          return s;
        };
        Int d = det(ri, ci);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      } while (next_comb(ci, a.cols()));
    } while (next_comb(ri, a.rows()));
    dd.push_back(g);
  }
  std::vector<Int> out;
  Int prev = 1;
  for (const Int& d : dd) {
    if (d == 0) break;
    out.push_back(d / prev);
    prev = d;
  }
  return out;
}

IntegerMatrix random_matrix(std::mt19937& rng, int r, int c, int lim) {
  std::uniform_int_distribution<int> d(-lim, lim);
  IntegerMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = d(rng);
  return m;
}

// random unimodular via a product of elementary matrices
IntegerMatrix random_unimodular(std::mt19937& rng, int n) {
  IntegerMatrix m = IntegerMatrix::identity(n);
  std::uniform_int_distribution<int> pick(0, n - 1), coef(-3, 3);
  for (int step = 0; step < 4 * n; ++step) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    Int q = coef(rng);
    for (int k = 0; k < n; ++k) m.at(i, k) += q * m.at(j, k);
  }
  return m;
}

bool is_unimodular(const IntegerMatrix& m) {
  // |det| = 1 iff SNF is the identity
  auto inv = smith_invariants(m);
  if (static_cast<int>(inv.size()) != m.rows()) return false;
  for (const Int& d : inv)
    if (d != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
  auto s = smith_normal_form(mat(2, 2, {2, 0, 0, 3}));
  CHECK(s.d.at(0, 0) == 1);
  CHECK(s.d.at(1, 1) == 6);

  auto s2 = smith_normal_form(mat(2, 2, {2, 4, 0, 0}));
  CHECK(s2.d.at(0, 0) == 2);
  CHECK(s2.d.at(1, 1) == 0);
}

TEST_CASE("smith normal form: U*A*V = D, unimodular transforms, chained diagonal") {
  std::mt19937 rng(20260826);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
    IntegerMatrix a = random_matrix(rng, r, c, 9);
    auto s = smith_normal_form(a);
    CHECK(s.u * a * s.v == s.d);
    CHECK(is_unimodular(s.u));
    CHECK(is_unimodular(s.v));
    for (int i = 0; i < std::min(r, c); ++i) {
      CHECK(s.d.at(i, i) >= 0);
      if (i + 1 < std::min(r, c) && s.d.at(i, i) != 0)
        CHECK(s.d.at(i + 1, i + 1) % s.d.at(i, i) == 0);
      if (s.d.at(i, i) == 0 && i + 1 < std::min(r, c)) CHECK(s.d.at(i + 1, i + 1) == 0);
    }
    // off-diagonal zero
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (i != j) CHECK(s.d.at(i, j) == 0);
  }
}

TEST_CASE("smith invariants agree with determinantal-divisor oracle") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    IntegerMatrix a = random_matrix(rng, r, c, 6);
    CHECK(smith_invariants(a) == snf_by_minors(a));
  }
}

TEST_CASE("sparse invariants match dense on random matrices") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 2 + trial % 7, c = 2 + (trial / 7) % 7;
    IntegerMatrix a = random_matrix(rng, r, c, 5);
    // sprinkle zeros to make it sparse-ish
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if ((i + 2 * j + trial) % 3 == 0) a.at(i, j) = 0;
    auto sparse = SparseIntMatrix::from_dense(a);
    CHECK(std::move(sparse).invariants() == smith_invariants_dense(a));
  }
}

TEST_CASE("integer kernel: a*k = 0 and kernel rank = nullity") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    int r = 1 + trial % 4, c = 1 + (trial / 4) % 5;
    IntegerMatrix a = random_matrix(rng, r, c, 7);
    IntegerMatrix k = integer_kernel(a);
    CHECK((a * k).is_zero());
    CHECK(k.cols() == c - integer_rank(a));
    if (k.cols() > 0) CHECK(integer_rank(k) == k.cols());
  }
}

TEST_CASE("cokernel: pinned examples") {
  // Z -> Z^3 as diag-ish inclusion with image generated by (3,0,0): coker = Z^2 + Z/3
  CHECK(cokernel(mat(3, 1, {3, 0, 0})) == FgAbelianGroup::make(2, {3}));
  // [2] : Z -> Z
  CHECK(cokernel(mat(1, 1, {2})) == FgAbelianGroup::cyclic(2));
  // empty map into Z^2
  CHECK(cokernel(IntegerMatrix(2, 0)) == FgAbelianGroup::free(2));
}

TEST_CASE("cokernel invariant under unimodular change of basis") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    int r = 2 + trial % 3, c = 2 + (trial / 3) % 3;
    IntegerMatrix a = random_matrix(rng, r, c, 8);
    IntegerMatrix p = random_unimodular(rng, r), q = random_unimodular(rng, c);
    CHECK(cokernel(a) == cokernel(p * a * q));
  }
}

TEST_CASE("FgAbelianGroup canonicalization and queries") {
  // Z/2 + Z/3 = Z/6
  CHECK(FgAbelianGroup::make(0, {2, 3}) == FgAbelianGroup::cyclic(6));
  // Z/4 + Z/2 stays two factors in chain order 2 | 4
  auto g = FgAbelianGroup::make(0, {4, 2});
  CHECK(g.invariant_factors() == std::vector<Int>{2, 4});
  // 1s dropped, 0s become free rank
  CHECK(FgAbelianGroup::make(1, {1, 0, 6}) == FgAbelianGroup::make(2, {6}));

  // torsion lengths
  CHECK(FgAbelianGroup::make(0, {2, 4, 4}).torsion_length(2) == 5);
  CHECK(FgAbelianGroup::make(1, {12}).torsion_length(2) == 2);
  CHECK(FgAbelianGroup::make(1, {12}).torsion_length(5) == 0);
  CHECK(FgAbelianGroup::make(0, {2, 4, 4}).p_rank(2) == 3);
  CHECK(FgAbelianGroup::make(0, {6, 12}).p_rank(3) == 2);
  CHECK(FgAbelianGroup::make(0, {6, 12}).p_rank(2) == 2);

  // direct sum re-canonicalizes
  auto a = FgAbelianGroup::make(1, {2});
  auto b = FgAbelianGroup::make(0, {3});
  CHECK(a.direct_sum(b) == FgAbelianGroup::make(1, {6}));
  CHECK(a.direct_sum(b).to_string() == "Z + Z/6");
}

TEST_CASE("direct sum torsion length is additive") {
  std::mt19937 rng(404);
  std::uniform_int_distribution<int> d(0, 3), f(1, 30);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Int> fa, fb;
    for (int i = d(rng); i > 0; --i) fa.push_back(f(rng));
    for (int i = d(rng); i > 0; --i) fb.push_back(f(rng));
    auto a = FgAbelianGroup::make(d(rng), fa);
    auto b = FgAbelianGroup::make(d(rng), fb);
    auto s = a.direct_sum(b);
    for (long p : {2, 3, 5, 7}) {
      CHECK(s.torsion_length(p) == a.torsion_length(p) + b.torsion_length(p));
      CHECK(s.free_rank() == a.free_rank() + b.free_rank());
    }
  }
}

TEST_CASE("cochain cohomology: sphere complex") {
  // simplicial S^2 cochain complex (boundary of a tetrahedron):
  // ranks 4, 6, 4 in degrees 0..2
  CochainComplexZ c(0, {4, 6, 4});
  // vertices 0..3; edges sorted pairs; faces sorted triples
  int edges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  int faces[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  SparseIntMatrix d0(6, 4);
  for (int e = 0; e < 6; ++e) {
    d0.add(e, edges[e][1], 1);
    d0.add(e, edges[e][0], -1);
  }
  SparseIntMatrix d1(4, 6);
  auto edge_index = [&](int u, int v) {
    for (int e = 0; e < 6; ++e)
      if (edges[e][0] == u && edges[e][1] == v) return e;
    return -1;
  };
  for (int f = 0; f < 4; ++f) {
    int* t = faces[f];
    d1.add(f, edge_index(t[1], t[2]), 1);
    d1.add(f, edge_index(t[0], t[2]), -1);
    d1.add(f, edge_index(t[0], t[1]), 1);
  }
  c.set_delta(0, std::move(d0));
  c.set_delta(1, std::move(d1));
  CHECK(c.verify_complex());
  CHECK(cochain_cohomology(c, 0) == FgAbelianGroup::free(1));
  CHECK(cochain_cohomology(c, 1) == FgAbelianGroup::trivial());
  CHECK(cochain_cohomology(c, 2) == FgAbelianGroup::free(1));
}

TEST_CASE("cochain cohomology: periodic mod-3 complex") {
  // ... -> Z -[0]-> Z -[3]-> Z -[0]-> Z  (degrees 0..3, deltas 0,3,0)
  CochainComplexZ c(0, {1, 1, 1, 1});
  c.set_delta_dense(0, mat(1, 1, {0}));
  c.set_delta_dense(1, mat(1, 1, {3}));
  c.set_delta_dense(2, mat(1, 1, {0}));
  CHECK(cochain_cohomology(c, 1) == FgAbelianGroup::trivial());
  CHECK(cochain_cohomology(c, 2) == FgAbelianGroup::cyclic(3));
}

TEST_CASE("cochain cohomology: euler characteristic conservation") {
  // For any complex, alternating sum of ranks = alternating sum of
  // free ranks of cohomology.
  std::mt19937 rng(777);
  for (int trial = 0; trial < 15; ++trial) {
    // build a random 3-term complex: pick d1 random, then d2 with d2*d1=0
    // by factoring d2 through the kernel of d1^T... simplest honest route:
    // pick A random and set complex C: 0 -> Z^a -A-> Z^b -> 0 padded with zeros.
    int a = 1 + trial % 4, b = 1 + (trial / 4) % 4;
    IntegerMatrix A = random_matrix(rng, b, a, 6);
    CochainComplexZ c(0, {static_cast<long>(a), static_cast<long>(b)});
    c.set_delta_dense(0, A);
    long lhs = a - b;
    long rhs = cochain_cohomology(c, 0).free_rank() - cochain_cohomology(c, 1).free_rank();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("cochain cohomology invariant under change of basis") {
  // conjugating each delta by unimodular basis changes preserves cohomology
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    IntegerMatrix A = random_matrix(rng, 3, 3, 4);
    CochainComplexZ c(0, {3, 3});
    c.set_delta_dense(0, A);
    IntegerMatrix p = random_unimodular(rng, 3), q = random_unimodular(rng, 3);
    CochainComplexZ c2(0, {3, 3});
    c2.set_delta_dense(0, p * A * q);
    for (int d = 0; d <= 1; ++d)
      CHECK(cochain_cohomology(c, d) == cochain_cohomology(c2, d));
  }
}
