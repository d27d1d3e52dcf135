// Free resolutions over group rings and H^d(G; M), with Shapiro transport
// and Lyndon-Hochschild-Serre E2 entries.
#pragma once

#include <eqco/exactalg.hpp>
#include <eqco/gmodules.hpp>
#include <eqco/groups.hpp>

#ifdef EQCO_DEBUG_RESOLUTION
#include <iostream>
#endif
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqco::cohomology {

using exactalg::CochainComplexZ;
using exactalg::FgAbelianGroup;
using exactalg::Int;
using exactalg::IntegerMatrix;
using exactalg::SparseIntMatrix;
using gmodules::GModule;
using groups::FiniteGroup;
using groups::GroupSpec;

// ---------------------------------------------------------------------------
// Resolutions of Z by free left ZG-modules.
//
// A boundary column holds the image of a ZG-basis vector as a ZG-linear
// combination of the previous degree's basis: entries (row, element, coeff).
// Storing boundaries natively over ZG makes equivariance structural.

struct ZGEntry {
  long row;
  int elem;
  Int coeff;
};
using ZGColumn = std::vector<ZGEntry>;

struct ZGMatrix {
  long rows = 0;  // ZG-rank of the target
  std::vector<ZGColumn> cols;
};

class Resolution {
 public:
  enum class Kind { PeriodicCyclic, Metacyclic, Quaternion, Bar, Generic };

  Resolution(std::shared_ptr<const FiniteGroup> g, Kind kind, int truncation,
             std::vector<long> ranks, std::vector<ZGMatrix> boundaries)
      : g_(std::move(g)),
        kind_(kind),
        truncation_(truncation),
        ranks_(std::move(ranks)),
        bnd_(std::move(boundaries)) {
    // ranks_ covers F_0..F_{truncation+1}; bnd_[d-1] is d_d : F_d -> F_{d-1}
    if (static_cast<int>(ranks_.size()) != truncation_ + 2 ||
        static_cast<int>(bnd_.size()) != truncation_ + 1)
      throw std::invalid_argument("resolution shape mismatch");
  }

  const FiniteGroup& group() const { return *g_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return g_; }
  Kind kind() const { return kind_; }
  int truncation() const { return truncation_; }
  long zg_rank(int d) const { return ranks_.at(d); }
  const ZGMatrix& boundary(int d) const { return bnd_.at(d - 1); }  // d in 1..T+1

  // The induced map on underlying Z-modules. Z-basis of F_d: (i, h) with
  // i < zg_rank(d), h in G; g acts by (i, h) -> (i, g h).
  SparseIntMatrix z_boundary(int d) const {
    const long n = g_->order();
    const ZGMatrix& b = boundary(d);
    SparseIntMatrix m(b.rows * n, static_cast<long>(b.cols.size()) * n);
    for (long j = 0; j < static_cast<long>(b.cols.size()); ++j)
      for (const ZGEntry& e : b.cols[j])
        for (int g = 0; g < n; ++g)
          m.add(e.row * n + g_->op(g, e.elem), j * n + g, e.coeff);
    return m;
  }

  // Certifies d o d = 0 at the ZG level, H_0 = Z, and exactness over Z at
  // every internal degree F_1..F_T: the columns of d_{d+1} must span the
  // saturated integer kernel lattice of d_d (the augmentation for d = 0)
  // unimodularly. Defined after detail::kernel_lattice below.
  void certify() const;

 private:
  std::shared_ptr<const FiniteGroup> g_;
  Kind kind_;
  int truncation_;
  std::vector<long> ranks_;
  std::vector<ZGMatrix> bnd_;
};

namespace detail {

// --- periodic resolution of a cyclic group: ranks 1, boundaries alternate
// (a - 1) and the norm N = 1 + a + ... + a^{n-1}.
inline Resolution build_periodic_cyclic(std::shared_ptr<const FiniteGroup> g, int truncation) {
  const long n = g->order();
  // locate a generator of the cyclic group
  int a = -1;
  for (int x = 0; x < n; ++x)
    if (g->element_order(x) == n) {
      a = x;
      break;
    }
  if (a < 0) throw std::invalid_argument("PeriodicCyclic requires a cyclic group");
  std::vector<long> ranks(truncation + 2, 1);
  std::vector<ZGMatrix> bnd;
  for (int d = 1; d <= truncation + 1; ++d) {
    ZGMatrix m;
    m.rows = 1;
    ZGColumn col;
    if (d % 2 == 1) {
      col.push_back({0, a, Int(1)});
      col.push_back({0, g->identity(), Int(-1)});
    } else {
      int x = g->identity();
      for (long i = 0; i < n; ++i) {
        col.push_back({0, x, Int(1)});
        x = g->op(x, a);
      }
    }
    m.cols.push_back(std::move(col));
    bnd.push_back(std::move(m));
  }
  return Resolution(std::move(g), Resolution::Kind::PeriodicCyclic, truncation, std::move(ranks),
                    std::move(bnd));
}

// --- normalized bar resolution: F_d free on tuples [g1|...|gd], g_i != e.
inline Resolution build_bar(std::shared_ptr<const FiniteGroup> g, int truncation) {
  const long n = g->order();
  if (n > 12 || truncation > 4)
    throw std::invalid_argument("Bar resolution capped at |G| <= 12, truncation <= 4");
  const int id = g->identity();
  // non-identity elements
  std::vector<int> nz;
  for (int x = 0; x < n; ++x)
    if (x != id) nz.push_back(x);
  const long m = static_cast<long>(nz.size());
  // tuple index in degree d: mixed-radix over nz
  auto decode = [&](long idx, int d) {
    std::vector<int> t(d);
    for (int i = d - 1; i >= 0; --i) {
      t[i] = nz[idx % m];
      idx /= m;
    }
    return t;
  };
  auto encode = [&](const std::vector<int>& t) {
    long idx = 0;
    for (int x : t) {
      long pos = std::lower_bound(nz.begin(), nz.end(), x) - nz.begin();
      idx = idx * m + pos;
    }
    return idx;
  };
  std::vector<long> ranks(truncation + 2);
  for (int d = 0; d <= truncation + 1; ++d) {
    long r = 1;
    for (int i = 0; i < d; ++i) r *= m;
    ranks[d] = r;
  }
  std::vector<ZGMatrix> bnd;
  for (int d = 1; d <= truncation + 1; ++d) {
    ZGMatrix mat;
    mat.rows = ranks[d - 1];
    mat.cols.resize(ranks[d]);
    for (long j = 0; j < ranks[d]; ++j) {
      std::vector<int> t = decode(j, d);
      ZGColumn& col = mat.cols[j];
      // g1 [g2|...|gd]
      {
        std::vector<int> rest(t.begin() + 1, t.end());
        col.push_back({encode(rest), t[0], Int(1)});
      }
      // interior contractions (normalized: drop when g_i g_{i+1} = e)
      for (int i = 0; i + 1 < d; ++i) {
        int prod = g->op(t[i], t[i + 1]);
        if (prod == id) continue;
        std::vector<int> s;
        for (int a2 = 0; a2 < d; ++a2) {
          if (a2 == i) {
            s.push_back(prod);
            ++a2;  // skip t[i+1]
          } else {
            s.push_back(t[a2]);
          }
        }
        col.push_back({encode(s), id, Int(i % 2 == 0 ? -1 : 1)});
      }
      // (-1)^d [g1|...|g_{d-1}]
      {
        std::vector<int> s(t.begin(), t.end() - 1);
        col.push_back({encode(s), id, Int(d % 2 == 0 ? 1 : -1)});
      }
      // merge duplicate (row, elem) keys
      std::map<std::pair<long, int>, Int> acc;
      for (auto& e : col) acc[{e.row, e.elem}] += e.coeff;
      col.clear();
      for (auto& [k, v] : acc)
        if (v != 0) col.push_back({k.first, k.second, v});
    }
    bnd.push_back(std::move(mat));
  }
  return Resolution(std::move(g), Resolution::Kind::Bar, truncation, std::move(ranks),
                    std::move(bnd));
}

// Integer lattice span in column echelon form with gcd pivot updates.
// Supports exact membership tests and cheap incremental insertion; used by
// the generic resolution builder to pick ZG-generators of boundary kernels.
class LatticeSpan {
 public:
  explicit LatticeSpan(long dim) : dim_(dim), pivot_col_(dim, -1) {}

  long rank() const { return static_cast<long>(cols_.size()); }
  bool full() const {
    if (rank() != dim_) return false;
    for (auto& c : cols_)
      if (c.pivot_value != 1) return false;
    return true;
  }
  // product of pivot entries: the index of the span inside its saturation's
  // coordinate lattice; smaller is closer to saturated
  Int pivot_product() const {
    Int p = 1;
    for (auto& c : cols_) p *= c.pivot_value;
    return p;
  }

  bool member(std::vector<Int> v) const {
    for (long r = 0; r < dim_; ++r) {
      if (v[r] == 0) continue;
      int c = pivot_col_[r];
      if (c < 0 || v[r] % cols_[c].pivot_value != 0) return false;
      Int q = v[r] / cols_[c].pivot_value;
      for (long i = r; i < dim_; ++i) v[i] -= q * cols_[c].data[i];
    }
    return true;
  }

  void add(std::vector<Int> v) {
    std::vector<int> touched;  // columns whose pivot or data changed
    for (long r = 0; r < dim_; ++r) {
      if (v[r] == 0) continue;
      int c = pivot_col_[r];
      if (c < 0) {
        if (v[r] < 0)
          for (long i = r; i < dim_; ++i) v[i] = -v[i];
        pivot_col_[r] = static_cast<int>(cols_.size());
        cols_.push_back({r, v[r], std::move(v)});
        touched.push_back(pivot_col_[r]);
        break;
      }
      Column& col = cols_[c];
      if (v[r] % col.pivot_value == 0) {
        Int q = v[r] / col.pivot_value;
        for (long i = r; i < dim_; ++i) v[i] -= q * col.data[i];
        continue;
      }
      // gcd step: replace the column by the gcd combination, continue with
      // the complementary combination (which vanishes at row r)
      Int gg, s, t;
      mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), col.pivot_value.get_mpz_t(),
                 v[r].get_mpz_t());
      Int ca = col.pivot_value / gg, cb = v[r] / gg;
      std::vector<Int> newcol(dim_), newv(dim_);
      for (long i = r; i < dim_; ++i) {
        newcol[i] = s * col.data[i] + t * v[i];
        newv[i] = ca * v[i] - cb * col.data[i];
      }
      col.data = std::move(newcol);
      col.pivot_value = gg;
      touched.push_back(c);
      v = std::move(newv);
    }
    // Hermite-style renormalization: keep every entry sitting at another
    // column's pivot row reduced modulo that pivot. Without this the Bezout
    // combinations above make entries swell without bound.
    for (int c : touched) normalize_column(c);
    for (int c : touched) reduce_others_at(c);
  }

 private:
  struct Column {
    long pivot_row;
    Int pivot_value;
    std::vector<Int> data;  // zeros above pivot_row
  };

  void normalize_column(int c) {
    Column& col = cols_[c];
    for (long r = col.pivot_row + 1; r < dim_; ++r) {
      int c2 = pivot_col_[r];
      if (c2 < 0 || c2 == c || col.data[r] == 0) continue;
      const Column& other = cols_[c2];
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), col.data[r].get_mpz_t(), other.pivot_value.get_mpz_t());
      if (q == 0) continue;
      for (long i = r; i < dim_; ++i) col.data[i] -= q * other.data[i];
    }
  }
  void reduce_others_at(int c) {
    const Column& pc = cols_[c];
    for (size_t c2 = 0; c2 < cols_.size(); ++c2) {
      if (static_cast<int>(c2) == c) continue;
      Column& col = cols_[c2];
      if (pc.pivot_row <= col.pivot_row || col.data[pc.pivot_row] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), col.data[pc.pivot_row].get_mpz_t(), pc.pivot_value.get_mpz_t());
      if (q == 0) continue;
      for (long i = pc.pivot_row; i < dim_; ++i) col.data[i] -= q * pc.data[i];
    }
  }

  long dim_;
  std::vector<int> pivot_col_;  // pivot row -> column index, -1 if none
  std::vector<Column> cols_;
};

// Integral LLL reduction (Cohen, Algorithm 2.6.3) of the linearly
// independent vectors vecs[lo..end) in place, using exact integer
// Gram-Schmidt data (lambda_{i,j} = d_j mu_{i,j}, D[i+1] = det of the leading
// i+1 x i+1 Gram block). Keeps the kernel bases (and so the boundary entries
// of the generic resolution) small; weaker pairwise reduction lets the
// carried transform swell into thousands of bits on the larger groups.
inline void lll_reduce(std::vector<std::vector<Int>>& vecs, size_t lo) {
  const long K = static_cast<long>(vecs.size() - lo);
  if (K <= 1) return;
  const size_t dim = vecs[lo].size();
  auto b = [&](long i) -> std::vector<Int>& { return vecs[lo + i]; };
  auto dot = [&](long x, long y) {
    Int s = 0;
    for (size_t t = 0; t < dim; ++t) s += b(x)[t] * b(y)[t];
    return s;
  };
  std::vector<Int> D(K + 1);
  D[0] = 1;
  std::vector<std::vector<Int>> lam(K);
  for (long i = 0; i < K; ++i) {
    lam[i].resize(i);
    for (long j = 0; j <= i; ++j) {
      Int u = dot(i, j);
      for (long l = 0; l < j; ++l) u = (D[l + 1] * u - lam[i][l] * lam[j][l]) / D[l];
      if (j < i)
        lam[i][j] = u;
      else
        D[i + 1] = u;
    }
  }
  auto red = [&](long k, long l) {
    // |2 lambda_{k,l}| <= d_l afterwards
    Int two = 2 * lam[k][l];
    if (mpz_cmpabs(two.get_mpz_t(), D[l + 1].get_mpz_t()) <= 0) return;
    Int q, num = two + D[l + 1], den = 2 * D[l + 1];
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    for (size_t t = 0; t < dim; ++t) b(k)[t] -= q * b(l)[t];
    lam[k][l] -= q * D[l + 1];
    for (long i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };
  long k = 1;
  while (k < K) {
    red(k, k - 1);
    // Lovasz condition with delta = 3/4
    if (4 * D[k + 1] * D[k - 1] < 3 * D[k] * D[k] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
      std::swap(b(k), b(k - 1));
      for (long j = 0; j < k - 1; ++j) std::swap(lam[k][j], lam[k - 1][j]);
      Int lv = lam[k][k - 1];
      Int Bv = (D[k - 1] * D[k + 1] + lv * lv) / D[k];
      for (long i = k + 1; i < K; ++i) {
        Int t = lam[i][k];
        lam[i][k] = (D[k + 1] * lam[i][k - 1] - lv * t) / D[k];
        lam[i][k - 1] = (Bv * t + lv * lam[i][k]) / D[k + 1];
      }
      D[k] = Bv;
      k = std::max(1L, k - 1);
    } else {
      for (long l = k - 2; l >= 0; --l) red(k, l);
      ++k;
    }
  }
}

inline void size_reduce_basis(std::vector<std::vector<Int>>& basis) { lll_reduce(basis, 0); }

// Saturated integer kernel of a matrix: a Z-basis of {x in Z^n : a x = 0}
// plus an exact coordinate map. The basis comes from unimodular column
// reduction of the input with a carried identity block: if a V = [H | 0]
// in column echelon form with V unimodular, the trailing columns of V are a
// Z-basis of the kernel and it is automatically saturated. Column operations
// use nearest-integer quotients and the still-active columns are Lagrange
// size-reduced whenever their entries grow, which keeps the reduction
// polynomial in practice; a full Smith elimination on these boundary
// matrices can swell entries doubly exponentially instead.
struct KernelLattice {
  long rank = 0;                        // rank of the input matrix
  std::vector<std::vector<Int>> basis;  // k vectors of length n
  exactalg::IntegerMatrix proj;         // k x n; coords of kernel v = (proj v) / den
  Int den = 1;
};

inline KernelLattice kernel_lattice(const exactalg::IntegerMatrix& a) {
  const int m = a.rows(), n = a.cols();
  // stacked columns: entries 0..m-1 mirror a's column, entries m..m+n-1 the
  // carried identity (the unimodular V being built)
  std::vector<std::vector<Int>> col(n, std::vector<Int>(m + n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) col[j][i] = a.at(i, j);
    col[j][m + j] = 1;
  }
  auto nearest_q = [](const Int& num, const Int& den) {  // round(num/den), den > 0
    Int q, lo = 2 * num + den, hi = 2 * den;
    mpz_fdiv_q(q.get_mpz_t(), lo.get_mpz_t(), hi.get_mpz_t());
    return q;
  };
  auto reduce_trailing = [&](int t) {
    // LLL-reduce the still-active stacked columns; a unimodular operation
    // among columns that already share zeros in every processed row, so the
    // echelon part is preserved
    lll_reduce(col, static_cast<size_t>(t));
  };
  int t = 0;  // number of pivot columns fixed so far
  for (int i = 0; i < m && t < n; ++i) {
    // euclidean column elimination of row i across the active columns
    while (true) {
      int best = -1;
      for (int j = t; j < n; ++j)
        if (col[j][i] != 0 &&
            (best < 0 || mpz_cmpabs(col[j][i].get_mpz_t(), col[best][i].get_mpz_t()) < 0))
          best = j;
      if (best < 0) break;  // row i is zero on the active columns
      std::swap(col[best], col[t]);
      if (col[t][i] < 0)
        for (Int& x : col[t]) x = -x;
      bool clean = true;
      for (int j = t + 1; j < n; ++j) {
        if (col[j][i] == 0) continue;
        Int q = nearest_q(col[j][i], col[t][i]);
        if (q != 0)
          for (int l = 0; l < m + n; ++l) col[j][l] -= q * col[t][l];
        if (col[j][i] != 0) clean = false;
      }
      if (clean) {
        ++t;
        break;
      }
    }
    size_t bits = 0;
    for (int j = t; j < n; ++j)
      for (int l = 0; l < m + n; ++l)
        bits = std::max(bits, mpz_sizeinbase(col[j][l].get_mpz_t(), 2));
    if (bits > 24) reduce_trailing(t);
#ifdef EQCO_DEBUG_RESOLUTION
    if (bits > 24) {
      size_t after = 0;
      for (int j = t; j < n; ++j)
        for (int l = 0; l < m + n; ++l)
          after = std::max(after, mpz_sizeinbase(col[j][l].get_mpz_t(), 2));
      std::cerr << "[kernel] row " << i << " t=" << t << " bits " << bits << " -> " << after
                << std::endl;
    }
#endif
  }
  KernelLattice out;
  out.rank = t;
  const long k = n - t;
  out.proj = exactalg::IntegerMatrix(static_cast<int>(k), n);
  if (k == 0) return out;
  out.basis.assign(k, std::vector<Int>(n));
  for (long i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) out.basis[i][j] = col[t + i][m + j];
  size_reduce_basis(out.basis);
#ifdef EQCO_DEBUG_RESOLUTION
  {
    size_t bb = 0;
    for (const auto& row : out.basis)
      for (const Int& x : row) bb = std::max(bb, mpz_sizeinbase(x.get_mpz_t(), 2));
    std::cerr << "[kernel] " << m << "x" << n << " rank=" << t << " k=" << k << " basisbits=" << bb
              << std::endl;
  }
#endif
  // coordinate map: with B the basis (k x n) and G = B B^T its Gram matrix,
  // any kernel vector v satisfies v = c B with c = G^{-1} B v, and c is
  // integral because B is a lattice basis. Store G^{-1} B as an integer
  // matrix over a common denominator.
  exactalg::IntegerMatrix gram(static_cast<int>(k), static_cast<int>(k));
  for (long x = 0; x < k; ++x)
    for (long y = 0; y < k; ++y) {
      Int s = 0;
      for (int j = 0; j < n; ++j) s += out.basis[x][j] * out.basis[y][j];
      gram.at(static_cast<int>(x), static_cast<int>(y)) = s;
    }
  // invert the Gram matrix over Q by Gaussian elimination on [G | I]
  std::vector<std::vector<mpq_class>> aug(k, std::vector<mpq_class>(2 * k, 0));
  for (long x = 0; x < k; ++x) {
    for (long y = 0; y < k; ++y) aug[x][y] = mpq_class(gram.at(static_cast<int>(x), static_cast<int>(y)));
    aug[x][k + x] = 1;
  }
  for (long p = 0; p < k; ++p) {
    long sel = -1;
    for (long x = p; x < k; ++x)
      if (aug[x][p] != 0) {
        sel = x;
        break;
      }
    if (sel < 0) throw std::logic_error("kernel basis Gram matrix is singular");
    std::swap(aug[p], aug[sel]);
    mpq_class piv = aug[p][p];
    for (long y = p; y < 2 * k; ++y) aug[p][y] /= piv;
    for (long x = 0; x < k; ++x) {
      if (x == p || aug[x][p] == 0) continue;
      mpq_class f = aug[x][p];
      for (long y = p; y < 2 * k; ++y) aug[x][y] -= f * aug[p][y];
    }
  }
  // proj/den = G^{-1} B
  std::vector<std::vector<mpq_class>> pq(k, std::vector<mpq_class>(n, 0));
  out.den = 1;
  for (long x = 0; x < k; ++x)
    for (int j = 0; j < n; ++j) {
      mpq_class s = 0;
      for (long y = 0; y < k; ++y)
        if (aug[x][k + y] != 0) s += aug[x][k + y] * mpq_class(out.basis[y][j]);
      pq[x][j] = s;
      mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), s.get_den().get_mpz_t());
    }
  for (long x = 0; x < k; ++x)
    for (int j = 0; j < n; ++j) {
      mpq_class scaled = pq[x][j] * mpq_class(out.den);
      out.proj.at(static_cast<int>(x), j) = scaled.get_num();
    }
  return out;
}

// Row-echelon span over F_p, used as a cheap mirror of the exact lattice
// span while the greedy below scores candidate generators. Rank gains over
// F_p match the rational ones for all but finitely many primes, and the
// choice only steers the heuristic -- exactness is enforced by the exact
// span and certified afterwards.
class ModSpan {
 public:
  static constexpr unsigned long kPrime = 2147483647ul;  // 2^31 - 1
  explicit ModSpan(long dim) : dim_(dim) {}
  long rank() const { return static_cast<long>(rows_.size()); }
  // reduce v against the echelon; returns true if it added a new row
  bool add(std::vector<unsigned long> v) {
    for (size_t r = 0; r < rows_.size(); ++r) {
      unsigned long c = v[piv_[r]];
      if (c == 0) continue;
      const unsigned long f = kPrime - c;  // v += f * row (rows have pivot 1)
      for (long j = 0; j < dim_; ++j)
        v[j] = (v[j] + f * static_cast<unsigned long long>(rows_[r][j])) % kPrime;
    }
    int p = -1;
    for (long j = 0; j < dim_; ++j)
      if (v[j] != 0) {
        p = static_cast<int>(j);
        break;
      }
    if (p < 0) return false;
    const unsigned long inv = inverse(v[p]);
    for (long j = 0; j < dim_; ++j) v[j] = (v[j] * static_cast<unsigned long long>(inv)) % kPrime;
    rows_.push_back(std::move(v));
    piv_.push_back(p);
    return true;
  }

 private:
  static unsigned long inverse(unsigned long a) {
    unsigned long long r = 1, b = a;
    unsigned long e = kPrime - 2;
    while (e) {
      if (e & 1) r = r * b % kPrime;
      b = b * b % kPrime;
      e >>= 1;
    }
    return static_cast<unsigned long>(r);
  }
  long dim_;
  std::vector<std::vector<unsigned long>> rows_;
  std::vector<int> piv_;
};

// --- generic kernel-lifting builder: at each degree, take a lattice basis
// of ker(d_d), pick ZG-generators by a max-coverage greedy (each step adds
// the basis vector whose translates enlarge the span the most), and make
// them the columns of d_{d+1}. Exact by construction; certified afterwards.
// The coverage heuristic keeps ranks near minimal.
inline Resolution build_generic(std::shared_ptr<const FiniteGroup> g, Resolution::Kind kind,
                                int truncation) {
  const long n = g->order();
  std::vector<long> ranks{1};
  std::vector<ZGMatrix> bnd;
  // current boundary matrix at the Z level; degree 0 uses the augmentation
  IntegerMatrix cur(1, static_cast<int>(n));
  for (int j = 0; j < n; ++j) cur.at(0, j) = 1;
  for (int d = 0; d <= truncation; ++d) {
    const long src_zg = ranks.back();
    const long src = src_zg * n;
#ifdef EQCO_DEBUG_RESOLUTION
    std::cerr << "[generic] d=" << d << " kernel " << cur.rows() << "x" << cur.cols() << std::endl;
#endif
    KernelLattice kl = kernel_lattice(cur);
    const long k = src - kl.rank;  // kernel rank
    auto kernel_coords = [&](const std::vector<Int>& v) {
      std::vector<Int> c(k);
      for (long i = 0; i < k; ++i) {
        Int acc = 0;
        for (long j2 = 0; j2 < src; ++j2)
          acc += kl.proj.at(static_cast<int>(i), static_cast<int>(j2)) * v[j2];
        Int q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), acc.get_mpz_t(), kl.den.get_mpz_t());
        if (rem != 0) throw std::logic_error("vector outside the kernel lattice");
        c[i] = q;
      }
      return c;
    };
    auto translate = [&](const std::vector<Int>& v, int gg) {
      // g acts on basis (i, h) -> (i, g h)
      std::vector<Int> w(src);
      for (long i = 0; i < src_zg; ++i)
        for (int h = 0; h < n; ++h) w[i * n + g->op(gg, h)] = v[i * n + h];
      return w;
    };
    // kernel basis in ambient coordinates (size-reduced by kernel_lattice)
    std::vector<std::vector<Int>> basis = kl.basis;
    // kernel-coordinate translates of every (reduced) basis vector, once,
    // exactly and reduced mod p for the cheap greedy scoring
    std::vector<std::vector<Int>> self_coords(k);
    std::vector<std::vector<std::vector<Int>>> orbit(k);
    std::vector<std::vector<std::vector<unsigned long>>> orbit_mod(k);
    std::vector<Int> cand_norm(k, 0);
    for (long cand = 0; cand < k; ++cand) {
      self_coords[cand] = kernel_coords(basis[cand]);
      orbit[cand].reserve(n);
      orbit_mod[cand].reserve(n);
      for (int gg = 0; gg < n; ++gg) {
        orbit[cand].push_back(kernel_coords(translate(basis[cand], gg)));
        std::vector<unsigned long> red(k);
        for (long i = 0; i < k; ++i) {
          const Int& x = orbit[cand].back()[i];
          unsigned long r2 = mpz_fdiv_ui(x.get_mpz_t(), ModSpan::kPrime);
          red[i] = r2;
        }
        orbit_mod[cand].push_back(std::move(red));
      }
      for (long j2 = 0; j2 < src; ++j2) cand_norm[cand] += basis[cand][j2] * basis[cand][j2];
    }
    // max-coverage greedy over the reduced basis vectors; rank gains are
    // scored in the mod-p mirror, membership and the actual span exactly
    std::vector<std::vector<Int>> chosen;  // ambient vectors
    LatticeSpan span(k);
    ModSpan mspan(k);
    while (k > 0 && !span.full()) {
      // pass 1: cheap mod-p rank gain for every candidate outside the span
      long best_gain = -1;
      std::vector<std::pair<Int, long>> shortlist;  // (norm, cand) at best gain
      for (long cand = 0; cand < k; ++cand) {
        if (span.member(self_coords[cand])) continue;
        ModSpan trial = mspan;
        long gain = 0;
        for (int gg = 0; gg < n; ++gg)
          if (trial.add(orbit_mod[cand][gg])) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          shortlist.clear();
        }
        if (gain == best_gain) shortlist.emplace_back(cand_norm[cand], cand);
      }
      if (shortlist.empty()) throw std::logic_error("kernel generation stalled");
      // pass 2: among the few best candidates, prefer the one leaving the
      // smallest index (closest to a saturated span), so later rounds do not
      // burn generators on index repair
      std::sort(shortlist.begin(), shortlist.end());
      if (shortlist.size() > 8) shortlist.resize(8);
      long best = -1;
      Int best_index = 0;
      for (auto& [nrm, cand] : shortlist) {
        LatticeSpan trial = span;
        for (int gg = 0; gg < n; ++gg) trial.add(orbit[cand][gg]);
        Int idx = trial.pivot_product();
        if (best < 0 || idx < best_index) {
          best = cand;
          best_index = idx;
        }
      }
      for (int gg = 0; gg < n; ++gg) {
        span.add(orbit[best][gg]);
        mspan.add(orbit_mod[best][gg]);
      }
      chosen.push_back(basis[best]);
#ifdef EQCO_DEBUG_RESOLUTION
      std::cerr << "[generic] d=" << d << " gen#" << chosen.size() << " span rank " << span.rank()
                << " indexbits=" << mpz_sizeinbase(span.pivot_product().get_mpz_t(), 2)
                << std::endl;
#endif
    }
    // assemble d_{d+1}
    ZGMatrix mat;
    mat.rows = src_zg;
    for (auto& w : chosen) {
      ZGColumn col;
      for (long i = 0; i < src_zg; ++i)
        for (int h = 0; h < n; ++h)
          if (w[i * n + h] != 0) col.push_back({i, h, w[i * n + h]});
      mat.cols.push_back(std::move(col));
    }
    const long next_zg = static_cast<long>(chosen.size());
    ranks.push_back(next_zg);
    // next Z-level boundary matrix
    IntegerMatrix nxt(static_cast<int>(src), static_cast<int>(next_zg * n));
    for (long j = 0; j < next_zg; ++j)
      for (const ZGEntry& e : mat.cols[j])
        for (int gg = 0; gg < n; ++gg)
          nxt.at(static_cast<int>(e.row * n + g->op(gg, e.elem)), static_cast<int>(j * n + gg)) += e.coeff;
    bnd.push_back(std::move(mat));
    cur = std::move(nxt);
  }
  return Resolution(std::move(g), kind, truncation, std::move(ranks), std::move(bnd));
}

}  // namespace detail

inline void Resolution::certify() const {
  const long n = g_->order();
  // d o d = 0 at the ZG level (implies the Z level). Degree-1 columns must
  // additionally be killed by the augmentation, i.e. have coefficient sum 0.
  for (int d = 2; d <= truncation_ + 1; ++d) {
    const ZGMatrix& hi = boundary(d);
    const ZGMatrix& lo = boundary(d - 1);
    for (auto& col : hi.cols) {
      // accumulate the composite column in (row, elem) -> coeff form
      std::map<std::pair<long, int>, Int> acc;
      for (const ZGEntry& e : col)
        for (const ZGEntry& f : lo.cols[e.row]) {
          auto key = std::make_pair(f.row, g_->op(e.elem, f.elem));
          acc[key] += e.coeff * f.coeff;
        }
      for (auto& [k, v] : acc)
        if (v != 0) throw std::logic_error("resolution: boundary composite is nonzero");
    }
  }
  for (auto& col : boundary(1).cols) {
    Int s = 0;
    for (const ZGEntry& e : col) s += e.coeff;
    if (s != 0) throw std::logic_error("resolution: H_0 is not Z");
  }
  // exactness: the image of d_{d+1} sits inside ker(d_d) by the composite
  // checks above; it equals that (saturated) kernel iff its coordinates in
  // the kernel lattice span Z^k unimodularly
  for (int d = 0; d <= truncation_; ++d) {
    exactalg::IntegerMatrix a;
    if (d == 0) {
      // the augmentation F_0 -> Z; exactness here is H_0 = Z
      a = exactalg::IntegerMatrix(1, static_cast<int>(n));
      for (int j = 0; j < n; ++j) a.at(0, j) = 1;
    } else {
      const ZGMatrix& b = boundary(d);
      a = exactalg::IntegerMatrix(static_cast<int>(b.rows * n),
                                  static_cast<int>(b.cols.size() * n));
      for (long j = 0; j < static_cast<long>(b.cols.size()); ++j)
        for (const ZGEntry& e : b.cols[j])
          for (int gg = 0; gg < n; ++gg)
            a.at(static_cast<int>(e.row * n + g_->op(gg, e.elem)),
                 static_cast<int>(j * n + gg)) += e.coeff;
    }
    detail::KernelLattice kl = detail::kernel_lattice(a);
    const long src = ranks_[d] * n;
    const long k = src - kl.rank;
    detail::LatticeSpan span(k);
    const ZGMatrix& hi = boundary(d + 1);
    for (const ZGColumn& col : hi.cols)
      for (int gg = 0; gg < n; ++gg) {
        std::vector<Int> w(src, 0);
        for (const ZGEntry& e : col) w[e.row * n + g_->op(gg, e.elem)] += e.coeff;
        std::vector<Int> c(k);
        for (long i = 0; i < k; ++i) {
          Int acc = 0;
          for (long j2 = 0; j2 < src; ++j2)
            acc += kl.proj.at(static_cast<int>(i), static_cast<int>(j2)) * w[j2];
          Int q, rem;
          mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), acc.get_mpz_t(), kl.den.get_mpz_t());
          if (rem != 0)
            throw std::logic_error("resolution: image escapes the kernel at degree " +
                                   std::to_string(d));
          c[i] = q;
        }
        span.add(std::move(c));
      }
    if (!span.full())
      throw std::logic_error("resolution: rank defect at degree " + std::to_string(d));
  }
}

inline Resolution build_resolution(std::shared_ptr<const FiniteGroup> g, Resolution::Kind kind,
                                   int truncation, bool certify = true) {
  Resolution r = [&] {
    switch (kind) {
      case Resolution::Kind::PeriodicCyclic:
        return detail::build_periodic_cyclic(g, truncation);
      case Resolution::Kind::Bar:
        return detail::build_bar(g, truncation);
      case Resolution::Kind::Metacyclic:
        if (g->spec().family != GroupSpec::Family::Metacyclic)
          throw std::invalid_argument("Metacyclic resolution requires a Metacyclic-family group");
        return detail::build_generic(g, kind, truncation);
      case Resolution::Kind::Quaternion:
        if (g->spec().family != GroupSpec::Family::Quaternion8)
          throw std::invalid_argument("Quaternion resolution requires Q8");
        return detail::build_generic(g, kind, truncation);
      case Resolution::Kind::Generic:
        return detail::build_generic(g, kind, truncation);
    }
    throw std::logic_error("unreachable");
  }();
  if (certify) r.certify();
  return r;
}

// ---------------------------------------------------------------------------
// Cochain complex Hom_ZG(F_*, M) and cohomology

// C^d = Hom_ZG(F_d, M) = M^{zg_rank(d)}; the coboundary delta_d is built
// from d_{d+1}: block (j, i) = sum over entries (i, h, c) of c * rho_M(h).
inline SparseIntMatrix cochain_delta(const Resolution& r, const GModule& m, int d) {
  const ZGMatrix& b = r.boundary(d + 1);
  const long rk = m.rank();
  SparseIntMatrix out(static_cast<long>(b.cols.size()) * rk, b.rows * rk);
  for (long j = 0; j < static_cast<long>(b.cols.size()); ++j)
    for (const ZGEntry& e : b.cols[j]) {
      const IntegerMatrix& act = m.act(e.elem);
      for (int a = 0; a < rk; ++a)
        for (int bb = 0; bb < rk; ++bb)
          if (act.at(a, bb) != 0) out.add(j * rk + a, e.row * rk + bb, e.coeff * act.at(a, bb));
    }
  return out;
}

inline CochainComplexZ cochain_complex(const Resolution& r, const GModule& m) {
  if (!m.over_whole_group() || &m.group() != &r.group())
    throw std::invalid_argument("coefficients must be a module over the resolution's group");
  const int top = r.truncation() + 1;
  std::vector<long> ranks(top + 1);
  for (int d = 0; d <= top; ++d) ranks[d] = r.zg_rank(d) * m.rank();
  CochainComplexZ c(0, std::move(ranks));
  for (int d = 0; d < top; ++d) c.set_delta(d, cochain_delta(r, m, d));
  return c;
}

inline FgAbelianGroup cohomology(const Resolution& r, const GModule& m, int d) {
  if (d < 0 || d > r.truncation())
    throw std::out_of_range("degree exceeds resolution truncation");
  return exactalg::cochain_cohomology(cochain_complex(r, m), d);
}

// Cohomology of several degrees off one cochain complex (avoids rebuilding).
inline std::vector<FgAbelianGroup> cohomology_range(const Resolution& r, const GModule& m,
                                                    int dlo, int dhi) {
  if (dhi > r.truncation()) throw std::out_of_range("degree exceeds resolution truncation");
  CochainComplexZ c = cochain_complex(r, m);
  std::vector<FgAbelianGroup> out;
  for (int d = dlo; d <= dhi; ++d) out.push_back(exactalg::cochain_cohomology(c, d));
  return out;
}

// ---------------------------------------------------------------------------
// Strategy selection

namespace detail {

inline bool table_cyclic(const FiniteGroup& g) {
  for (int x = 0; x < g.order(); ++x)
    if (g.element_order(x) == g.order()) return true;
  return g.order() == 1;
}

}  // namespace detail

// Auto order: PeriodicCyclic for (table-)cyclic groups, the named specialized
// resolution for Metacyclic/Q8 specs, Generic otherwise. (The closed-form
// fast path lives in closed_form_cohomology; group_cohomology always computes.)
inline Resolution::Kind auto_strategy(const FiniteGroup& g) {
  if (detail::table_cyclic(g)) return Resolution::Kind::PeriodicCyclic;
  if (g.spec().family == GroupSpec::Family::Metacyclic) return Resolution::Kind::Metacyclic;
  if (g.spec().family == GroupSpec::Family::Quaternion8) return Resolution::Kind::Quaternion;
  return Resolution::Kind::Generic;
}

inline FgAbelianGroup group_cohomology(std::shared_ptr<const FiniteGroup> g, const GModule& m,
                                       int d) {
  Resolution r = build_resolution(g, auto_strategy(*g), d, /*certify=*/false);
  return cohomology(r, m, d);
}

inline FgAbelianGroup group_cohomology(std::shared_ptr<const FiniteGroup> g, const GModule& m,
                                       int d, Resolution::Kind kind) {
  Resolution r = build_resolution(g, kind, d, /*certify=*/false);
  return cohomology(r, m, d);
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

inline long multiplicative_order(long k, long m) {
  long x = ((k % m) + m) % m, o = 1;
  long acc = x;
  while (acc != 1 % m) {
    acc = acc * x % m;
    ++o;
    if (o > m) throw std::invalid_argument("k is not a unit mod m");
  }
  return o;
}

}  // namespace detail

// The displayed tables:
//  - Metacyclic Z_p x| Z_n (p prime, gcd(p, n) = 1, twist k of
//    multiplicative order q mod p): H^0 = Z; H^i = 0 for i odd;
//    H^i = Z_n for i even with 2q not dividing i; H^i = Z_p + Z_n for
//    i > 0 with i = 0 mod 2q.
//  - Quaternion8: H^0 = Z; 0 in odd degrees; Z_2+Z_2 for i = 2 mod 4;
//    Z_8 for positive i = 0 mod 4.
//  - Ck variant for D_p: H^n(D_p; Ck(Z)) = Z_p iff n = 3 mod 4, else 0.
inline FgAbelianGroup closed_form_cohomology(const GroupSpec& spec, int d,
                                             bool ck_variant = false) {
  if (d < 0) throw std::out_of_range("negative degree");
  if (ck_variant) {
    if (spec.family != GroupSpec::Family::Metacyclic || spec.n != 2 ||
        !groups::detail::is_prime(spec.m) || spec.m == 2 ||
        ((spec.k - (spec.m - 1)) % spec.m) != 0)
      throw std::invalid_argument("Ck closed form applies to dihedral D_p, p odd prime");
    if (d % 4 == 3) return FgAbelianGroup::cyclic(spec.m);
    return FgAbelianGroup::trivial();
  }
  if (spec.family == GroupSpec::Family::Quaternion8) {
    if (d == 0) return FgAbelianGroup::free(1);
    if (d % 2 == 1) return FgAbelianGroup::trivial();
    if (d % 4 == 2) return FgAbelianGroup::make(0, {2, 2});
    return FgAbelianGroup::cyclic(8);
  }
  if (spec.family == GroupSpec::Family::Metacyclic) {
    const long p = spec.m, qn = spec.n;
    if (!groups::detail::is_prime(p) || std::gcd(p, qn) != 1)
      throw std::invalid_argument("closed form requires Z_p x| Z_n with p prime, gcd(p, n) = 1");
    // q is the multiplicative order of the twist; q = 1 is the direct
    // product, where the Z_p summand appears in every positive even degree
    const long q = detail::multiplicative_order(spec.k, p);
    if (d == 0) return FgAbelianGroup::free(1);
    if (d % 2 == 1) return FgAbelianGroup::trivial();
    if (d % (2 * q) == 0) return FgAbelianGroup::make(0, {Int(p), Int(qn)});
    return FgAbelianGroup::cyclic(qn);
  }
  throw std::invalid_argument("no closed form for this family");
}

// ---------------------------------------------------------------------------
// LHS E2 entries for G = Z_p x| Z_{q^n}
//
// Row j: H^j(Z_p; Z) = Z (j = 0), 0 (j odd), Z/p with the quotient generator
// acting by k^{j/2} (j even > 0). Column i applies H^i(Z_{q^n}; -).

namespace detail {

// H^i of a cyclic group of order m acting on Z/p by multiplication by kappa.
inline FgAbelianGroup cyclic_cohomology_mod_p(long m, long p, long kappa, int i) {
  kappa = ((kappa % p) + p) % p;
  // norm N = 1 + kappa + ... + kappa^{m-1} mod p
  long norm = 0, acc = 1;
  for (long t = 0; t < m; ++t) {
    norm = (norm + acc) % p;
    acc = acc * kappa % p;
  }
  const long tminus = ((kappa - 1) % p + p) % p;
  // on Z/p: ker(mult by t) has order gcd(t, p), reading t = 0 as p
  auto kord = [&](long t2) { return t2 % p == 0 ? p : std::gcd(t2 % p, p); };
  auto iord = [&](long t2) { return p / kord(t2); };  // |image|
  long size;
  if (i == 0) {
    size = kord(tminus);
  } else if (i % 2 == 1) {
    size = kord(norm) / iord(tminus);
  } else {
    size = kord(tminus) / iord(norm);
  }
  if (size == 1) return FgAbelianGroup::trivial();
  return FgAbelianGroup::cyclic(size);
}

// H^i(Z_m; Z) with trivial action.
inline FgAbelianGroup cyclic_cohomology_trivial_z(long m, int i) {
  if (i == 0) return FgAbelianGroup::free(1);
  if (i % 2 == 1) return FgAbelianGroup::trivial();
  return FgAbelianGroup::cyclic(m);
}

}  // namespace detail

inline FgAbelianGroup lhs_e2_entry(long p, long qn, long k, int i, int j) {
  if (!groups::detail::is_prime(p)) throw std::invalid_argument("N must be Z_p, p prime");
  if (i < 0 || j < 0) throw std::out_of_range("negative bidegree");
  if (k % p == 0) throw std::invalid_argument("invalid twist");
  if (groups::detail::pow_mod(k, qn, p) != 1)
    throw std::invalid_argument("twist incompatible with quotient order");
  if (j == 0) return detail::cyclic_cohomology_trivial_z(qn, i);
  if (j % 2 == 1) return FgAbelianGroup::trivial();
  gmodules::TwistedPowerDatum row = gmodules::twisted_power_module(p, k, j / 2);
  return detail::cyclic_cohomology_mod_p(qn, p, row.multiplier, i);
}

// ---------------------------------------------------------------------------
// Subgroups as groups, and the Shapiro check

// Reindexes a subgroup's elements into a standalone FiniteGroup. Returns the
// group plus the old-index list (new index i corresponds to elems[i]).
inline std::pair<FiniteGroup, std::vector<int>> subgroup_as_group(const FiniteGroup& g,
                                                                  std::vector<int> elems) {
  std::sort(elems.begin(), elems.end());
  const long h = static_cast<long>(elems.size());
  std::map<int, int> idx;
  for (long i = 0; i < h; ++i) idx[elems[i]] = static_cast<int>(i);
  std::vector<int> table(h * h);
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < h; ++j) {
      auto it = idx.find(g.op(elems[i], elems[j]));
      if (it == idx.end()) throw std::invalid_argument("element set is not a subgroup");
      table[i * h + j] = it->second;
    }
  std::vector<std::pair<std::string, int>> gens;
  for (long i = 0; i < h; ++i) gens.emplace_back("s" + std::to_string(i), static_cast<int>(i));
  // spec tag: honest when cyclic; otherwise a placeholder (never rebuilt)
  GroupSpec spec = GroupSpec::cyclic(h);
  {
    bool cyc = false;
    FiniteGroup probe(h, table, gens, spec);
    for (int x = 0; x < h; ++x)
      if (probe.element_order(x) == h) cyc = true;
    if (!cyc && h > 1) spec = GroupSpec::direct_product({});
    return {FiniteGroup(h, std::move(table), std::move(gens), spec), std::move(elems)};
  }
}

// Transports an H-module (H given inside G) onto the standalone subgroup group.
inline GModule reindex_module(const GModule& m, std::shared_ptr<const FiniteGroup> h_group,
                              const std::vector<int>& old_index) {
  std::map<int, IntegerMatrix> rho;
  std::vector<int> support;
  for (int i = 0; i < h_group->order(); ++i) {
    rho[i] = m.act(old_index[i]);
    support.push_back(i);
  }
  return GModule(std::move(h_group), std::move(support), m.rank(), std::move(rho));
}

struct ShapiroReport {
  bool ok = true;
  struct Row {
    int degree;
    FgAbelianGroup g_side, h_side;
  };
  std::vector<Row> rows;
};

// H^d(G; Coind_H^G M) vs H^d(H; M) across a degree window.
inline ShapiroReport shapiro_check(std::shared_ptr<const FiniteGroup> g,
                                   const std::vector<int>& h, const GModule& m_over_h, int dlo,
                                   int dhi) {
  ShapiroReport rep;
  GModule coind = gmodules::coinduced_module(g, h, m_over_h);
  Resolution rg = build_resolution(g, auto_strategy(*g), dhi, /*certify=*/false);
  auto [hg, old_index] = subgroup_as_group(*g, h);
  auto hptr = std::make_shared<const FiniteGroup>(std::move(hg));
  GModule mh = reindex_module(m_over_h, hptr, old_index);
  Resolution rh = build_resolution(hptr, auto_strategy(*hptr), dhi, /*certify=*/false);
  std::vector<FgAbelianGroup> gs = cohomology_range(rg, coind, dlo, dhi);
  std::vector<FgAbelianGroup> hs = cohomology_range(rh, mh, dlo, dhi);
  for (int d = dlo; d <= dhi; ++d) {
    ShapiroReport::Row row{d, gs[d - dlo], hs[d - dlo]};
    if (!(row.g_side == row.h_side)) rep.ok = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace eqco::cohomology
