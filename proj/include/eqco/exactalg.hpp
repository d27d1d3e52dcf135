// Exact integer linear algebra: Smith normal form, finitely generated
// abelian groups in canonical form, and cohomology of integer cochain
// complexes. All arithmetic is arbitrary precision (GMP).
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqco::exactalg {

using Int = mpz_class;

// ---------------------------------------------------------------------------
// IntegerMatrix

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix size");
  }

  static IntegerMatrix identity(int n) {
    IntegerMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  bool operator==(const IntegerMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  IntegerMatrix operator*(const IntegerMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    IntegerMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Int& v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < o.cols_; ++j)
          if (o.at(k, j) != 0) r.at(i, j) += v * o.at(k, j);
      }
    return r;
  }

  IntegerMatrix operator+(const IntegerMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum shape");
    IntegerMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  IntegerMatrix operator-(const IntegerMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix diff shape");
    IntegerMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  IntegerMatrix transpose() const {
    IntegerMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  bool is_zero() const {
    for (const Int& v : a_)
      if (v != 0) return false;
    return true;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
      os << (i ? "; " : "");
      for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

// ---------------------------------------------------------------------------
// Smith normal form

struct SmithDecomposition {
  IntegerMatrix u, d, v;  // u * input * v = d
};

namespace detail {

// Core Smith elimination. Operates on d in place; u and v are updated when
// non-null. Pivot choice is gcd-minimal (smallest |entry| in the remaining
// block), which keeps coefficient growth in check on the sparse boundary
// matrices this library produces.
inline void smith_core(IntegerMatrix& d, IntegerMatrix* u, IntegerMatrix* v) {
  const int r = d.rows(), c = d.cols();
  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c; ++k) std::swap(d.at(i, k), d.at(j, k));
    if (u)
      for (int k = 0; k < u->cols(); ++k) std::swap(u->at(i, k), u->at(j, k));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < r; ++k) std::swap(d.at(k, i), d.at(k, j));
    if (v)
      for (int k = 0; k < v->rows(); ++k) std::swap(v->at(k, i), v->at(k, j));
  };
  auto add_row = [&](int dst, int src, const Int& q) {  // row_dst += q*row_src
    if (q == 0) return;
    for (int k = 0; k < c; ++k) d.at(dst, k) += q * d.at(src, k);
    if (u)
      for (int k = 0; k < u->cols(); ++k) u->at(dst, k) += q * u->at(src, k);
  };
  auto add_col = [&](int dst, int src, const Int& q) {
    if (q == 0) return;
    for (int k = 0; k < r; ++k) d.at(k, dst) += q * d.at(k, src);
    if (v)
      for (int k = 0; k < v->rows(); ++k) v->at(k, dst) += q * v->at(k, src);
  };
  auto negate_row = [&](int i) {
    for (int k = 0; k < c; ++k) d.at(i, k) = -d.at(i, k);
    if (u)
      for (int k = 0; k < u->cols(); ++k) u->at(i, k) = -u->at(i, k);
  };

  int t = 0;
  const int lim = std::min(r, c);
  while (t < lim) {
    // locate minimal nonzero |entry| in the trailing block; among ties pick
    // the one with the fewest other nonzeros in its row and column (Markowitz),
    // which curbs fill-in and the entry swell it causes
    std::vector<long> rnnz(r, 0), cnnz(c, 0);
    int pi = -1, pj = -1;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j) {
        const Int& x = d.at(i, j);
        if (x == 0) continue;
        ++rnnz[i];
        ++cnnz[j];
        if (pi < 0 || mpz_cmpabs(x.get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // zero block
    {
      long best = (rnnz[pi] - 1) * (cnnz[pj] - 1);
      for (int i = t; i < r && best > 0; ++i)
        for (int j = t; j < c && best > 0; ++j) {
          const Int& x = d.at(i, j);
          if (x == 0 || mpz_cmpabs(x.get_mpz_t(), d.at(pi, pj).get_mpz_t()) != 0) continue;
          long score = (rnnz[i] - 1) * (cnnz[j] - 1);
          if (score < best) {
            best = score;
            pi = i;
            pj = j;
          }
        }
    }
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      bool dirty = false;
      for (int i = t + 1; i < r; ++i) {
        if (d.at(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(i, t).get_mpz_t(), d.at(t, t).get_mpz_t());
        add_row(i, t, -q);
        if (d.at(i, t) != 0) {  // remainder is strictly smaller; promote it
          swap_rows(t, i);
          dirty = true;
        }
      }
      for (int j = t + 1; j < c; ++j) {
        if (d.at(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d.at(t, j).get_mpz_t(), d.at(t, t).get_mpz_t());
        add_col(j, t, -q);
        if (d.at(t, j) != 0) {
          swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // row and column are clear; enforce the divisibility chain
      bool fixed = true;
      for (int i = t + 1; i < r && fixed; ++i)
        for (int j = t + 1; j < c && fixed; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            add_row(t, i, 1);
            fixed = false;
          }
      if (fixed) break;
    }
    if (d.at(t, t) < 0) negate_row(t);
    ++t;
  }
}

}  // namespace detail

inline SmithDecomposition smith_normal_form(const IntegerMatrix& a) {
  SmithDecomposition s;
  s.d = a;
  s.u = IntegerMatrix::identity(a.rows());
  s.v = IntegerMatrix::identity(a.cols());
  detail::smith_core(s.d, &s.u, &s.v);
  return s;
}

// Diagonal invariants d1 | d2 | ... (zeros trimmed), no transform tracking.
inline std::vector<Int> smith_invariants_dense(IntegerMatrix a) {
  detail::smith_core(a, nullptr, nullptr);
  std::vector<Int> out;
  for (int t = 0; t < std::min(a.rows(), a.cols()); ++t)
    if (a.at(t, t) != 0) out.push_back(a.at(t, t));
  return out;
}

// ---------------------------------------------------------------------------
// Sparse matrices. The coboundary matrices of bar resolutions are far too
// large for dense storage, but nearly all their entries are +-1; unit-pivot
// elimination shrinks them to a small dense core.

class SparseIntMatrix {
 public:
  SparseIntMatrix() = default;
  SparseIntMatrix(long rows, long cols) : rows_(rows), cols_(cols), row_(rows) {}

  long rows() const { return rows_; }
  long cols() const { return cols_; }

  void add(long i, long j, const Int& val) {
    if (val == 0) return;
    auto& m = row_[i];
    auto it = m.find(j);
    if (it == m.end()) {
      m.emplace(j, val);
    } else {
      it->second += val;
      if (it->second == 0) m.erase(it);
    }
  }

  long nnz() const {
    long n = 0;
    for (auto& m : row_) n += static_cast<long>(m.size());
    return n;
  }

  static SparseIntMatrix from_dense(const IntegerMatrix& a) {
    SparseIntMatrix s(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j)
        if (a.at(i, j) != 0) s.add(i, j, a.at(i, j));
    return s;
  }

  IntegerMatrix to_dense() const {
    IntegerMatrix a(static_cast<int>(rows_), static_cast<int>(cols_));
    for (long i = 0; i < rows_; ++i)
      for (auto& [j, val] : row_[i]) a.at(static_cast<int>(i), static_cast<int>(j)) = val;
    return a;
  }

  const std::map<long, Int>& row(long i) const { return row_[i]; }

  // Smith invariants. Destroys the matrix.
  std::vector<Int> invariants() && {
    // column -> set of live rows containing a nonzero there
    std::map<long, std::set<long>> col_rows;
    // live rows keyed by current length, so pivot search can stay local to
    // the shortest rows instead of sweeping everything every step
    std::set<std::pair<long, long>> by_len;
    for (long i = 0; i < rows_; ++i) {
      if (row_[i].empty()) continue;
      by_len.emplace(static_cast<long>(row_[i].size()), i);
      for (auto& [j, v] : row_[i]) col_rows[j].insert(i);
    }
    long unit_pivots = 0;
    for (;;) {
      // choose a +-1 pivot with minimal Markowitz cost among the shortest
      // rows; rows beyond the examination window only matter if nothing
      // shorter has a unit entry
      long bi = -1, bj = -1;
      unsigned long best = ~0ul;
      int examined = 0;
      for (auto it = by_len.begin(); it != by_len.end(); ++it) {
        if (bi >= 0 && examined >= 24) break;
        if (++examined > 4096) break;
        const long i = it->second;
        const long rn = it->first;
        for (auto& [j, v] : row_[i]) {
          if (v != 1 && v != -1) continue;
          const unsigned long cost =
              static_cast<unsigned long>(rn - 1) *
              static_cast<unsigned long>(col_rows[j].size() - 1);
          if (cost < best) {
            best = cost;
            bi = i;
            bj = j;
            if (cost == 0) break;
          }
        }
        if (best == 0) break;
      }
      if (bi < 0) break;
      const Int piv = row_[bi][bj];
      // eliminate column bj with row bi
      std::vector<long> hit(col_rows[bj].begin(), col_rows[bj].end());
      for (long i : hit) {
        if (i == bi) continue;
        Int factor = row_[i][bj] / piv;  // exact: piv is a unit
        if (factor == 0) continue;
        by_len.erase({static_cast<long>(row_[i].size()), i});
        for (auto& [j, v] : row_[bi]) {
          auto& m = row_[i];
          auto it = m.find(j);
          if (it == m.end()) {
            m.emplace(j, -factor * v);
            col_rows[j].insert(i);
          } else {
            it->second -= factor * v;
            if (it->second == 0) {
              m.erase(it);
              col_rows[j].erase(i);
            }
          }
        }
        if (!row_[i].empty()) by_len.emplace(static_cast<long>(row_[i].size()), i);
      }
      // retire the pivot row and column
      by_len.erase({static_cast<long>(row_[bi].size()), bi});
      for (auto& [j, v] : row_[bi]) col_rows[j].erase(bi);
      row_[bi].clear();
      col_rows.erase(bj);
      ++unit_pivots;
    }
    // dense finish on the residual core
    std::map<long, int> cmap;
    std::vector<long> rlist;
    rlist.reserve(by_len.size());
    for (auto& [len, i] : by_len) rlist.push_back(i);
    std::sort(rlist.begin(), rlist.end());
    for (long i : rlist)
      for (auto& [j, v] : row_[i])
        if (!cmap.count(j)) {
          int id = static_cast<int>(cmap.size());
          cmap[j] = id;
        }
    IntegerMatrix core(static_cast<int>(rlist.size()), static_cast<int>(cmap.size()));
    for (size_t i = 0; i < rlist.size(); ++i)
      for (auto& [j, v] : row_[rlist[i]]) core.at(static_cast<int>(i), cmap[j]) = v;
    std::vector<Int> inv = smith_invariants_dense(core);
    std::vector<Int> out(static_cast<size_t>(unit_pivots), Int(1));
    out.insert(out.end(), inv.begin(), inv.end());
    return out;
  }

  long rank() && { return static_cast<long>(std::move(*this).invariants().size()); }

 private:
  long rows_ = 0, cols_ = 0;
  std::vector<std::map<long, Int>> row_;
};

inline std::vector<Int> smith_invariants(const IntegerMatrix& a) {
  const long size = static_cast<long>(a.rows()) * a.cols();
  if (size > 40000) return SparseIntMatrix::from_dense(a).invariants();
  return smith_invariants_dense(a);
}

inline long integer_rank(const IntegerMatrix& a) {
  return static_cast<long>(smith_invariants(a).size());
}

// Integral kernel of a: columns x with a*x = 0. Returns a matrix whose
// columns are a lattice basis of the kernel.
inline IntegerMatrix integer_kernel(const IntegerMatrix& a) {
  SmithDecomposition s = smith_normal_form(a);
  int rank = 0;
  for (int t = 0; t < std::min(a.rows(), a.cols()); ++t)
    if (s.d.at(t, t) != 0) ++rank;
  IntegerMatrix k(a.cols(), a.cols() - rank);
  for (int i = 0; i < a.cols(); ++i)
    for (int j = rank; j < a.cols(); ++j) k.at(i, j - rank) = s.v.at(i, j);
  return k;
}

// ---------------------------------------------------------------------------
// FgAbelianGroup

inline int valuation(Int n, const Int& p) {
  if (n == 0) throw std::invalid_argument("valuation of 0");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

namespace detail {

inline std::vector<Int> factor_primes(Int n) {
  std::vector<Int> primes;
  for (Int p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) primes.push_back(n);
  return primes;
}

}  // namespace detail

// Canonical form of a finitely generated abelian group: free rank plus an
// invariant factor chain d1 | d2 | ... with every di >= 2. Equal groups have
// equal fields, so equality is memberwise.
class FgAbelianGroup {
 public:
  FgAbelianGroup() = default;

  // Canonicalizes an arbitrary factor list (1s dropped, chain rebuilt).
  static FgAbelianGroup make(long free_rank, std::vector<Int> factors) {
    FgAbelianGroup g;
    g.free_rank_ = free_rank;
    std::vector<Int> keep;
    for (Int& f : factors) {
      if (f < 0) f = -f;
      if (f == 0) {
        ++g.free_rank_;
        continue;
      }
      if (f > 1) keep.push_back(f);
    }
    if (keep.empty()) return g;
    // already a divisibility chain? then it is canonical as is
    bool chained = true;
    for (size_t i = 0; i + 1 < keep.size(); ++i)
      if (keep[i + 1] % keep[i] != 0) {
        chained = false;
        break;
      }
    if (chained) {
      g.factors_ = std::move(keep);
      return g;
    }
    // rebuild from valuation profiles per prime
    std::set<Int> prime_set;
    for (const Int& f : keep)
      for (const Int& p : detail::factor_primes(f)) prime_set.insert(p);
    std::map<Int, std::vector<int>> vals;  // prime -> descending valuations
    size_t maxlen = 0;
    for (const Int& p : prime_set) {
      std::vector<int> vs;
      for (const Int& f : keep) {
        int v = 0;
        Int x = f;
        while (x % p == 0) {
          x /= p;
          ++v;
        }
        if (v) vs.push_back(v);
      }
      std::sort(vs.rbegin(), vs.rend());
      maxlen = std::max(maxlen, vs.size());
      vals[p] = std::move(vs);
    }
    std::vector<Int> chain(maxlen, Int(1));  // chain[0] = largest factor
    for (auto& [p, vs] : vals)
      for (size_t i = 0; i < vs.size(); ++i) {
        Int pw = 1;
        for (int k = 0; k < vs[i]; ++k) pw *= p;
        chain[i] *= pw;
      }
    std::reverse(chain.begin(), chain.end());
    g.factors_ = std::move(chain);
    return g;
  }

  static FgAbelianGroup free(long rank) { return make(rank, {}); }
  static FgAbelianGroup trivial() { return {}; }
  static FgAbelianGroup cyclic(const Int& n) { return make(0, {n}); }

  long free_rank() const { return free_rank_; }
  const std::vector<Int>& invariant_factors() const { return factors_; }
  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }

  bool operator==(const FgAbelianGroup& o) const {
    return free_rank_ == o.free_rank_ && factors_ == o.factors_;
  }
  bool operator!=(const FgAbelianGroup& o) const { return !(*this == o); }

  FgAbelianGroup direct_sum(const FgAbelianGroup& o) const {
    std::vector<Int> all = factors_;
    all.insert(all.end(), o.factors_.begin(), o.factors_.end());
    return make(free_rank_ + o.free_rank_, std::move(all));
  }

  // Sum of p-adic valuations of the invariant factors.
  long torsion_length(const Int& p) const {
    long s = 0;
    for (const Int& f : factors_) {
      Int x = f;
      while (x % p == 0) {
        x /= p;
        ++s;
      }
    }
    return s;
  }

  // Number of invariant factors divisible by p.
  long p_rank(const Int& p) const {
    long s = 0;
    for (const Int& f : factors_)
      if (f % p == 0) ++s;
    return s;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank_ > 0) {
      os << "Z";
      if (free_rank_ > 1) os << "^" << free_rank_;
      first = false;
    }
    for (const Int& f : factors_) {
      if (!first) os << " + ";
      os << "Z/" << f.get_str();
      first = false;
    }
    return os.str();
  }

 private:
  long free_rank_ = 0;
  std::vector<Int> factors_;
};

// Z^rows / column span of a.
inline FgAbelianGroup cokernel(const IntegerMatrix& a) {
  std::vector<Int> inv = smith_invariants(a);
  const long rank = static_cast<long>(inv.size());
  return FgAbelianGroup::make(a.rows() - rank, std::move(inv));
}

// ---------------------------------------------------------------------------
// Integer cochain complexes

// Degrees lo..hi with a free cochain group per degree; delta_d maps degree d
// to degree d+1. Maps outside the stored window are zero.
class CochainComplexZ {
 public:
  CochainComplexZ(int lo, std::vector<long> ranks) : lo_(lo), ranks_(std::move(ranks)) {
    deltas_.resize(ranks_.size());
    for (size_t i = 0; i + 1 < ranks_.size(); ++i)
      deltas_[i] = SparseIntMatrix(ranks_[i + 1], ranks_[i]);
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  long rank(int d) const {
    if (d < lo() || d > hi()) return 0;
    return ranks_[d - lo_];
  }

  // delta_d : C^d -> C^{d+1}; must have rank(d) columns, rank(d+1) rows.
  void set_delta(int d, SparseIntMatrix m) {
    if (d < lo() || d >= hi()) throw std::out_of_range("delta outside window");
    if (m.rows() != rank(d + 1) || m.cols() != rank(d))
      throw std::invalid_argument("delta shape mismatch");
    deltas_[d - lo_] = std::move(m);
  }
  void set_delta_dense(int d, const IntegerMatrix& m) {
    set_delta(d, SparseIntMatrix::from_dense(m));
  }

  const SparseIntMatrix& delta(int d) const { return deltas_[d - lo_]; }
  bool has_delta(int d) const { return d >= lo() && d < hi(); }

  // delta_{d+1} o delta_d = 0 for all applicable d.
  bool verify_complex() const {
    for (int d = lo(); d + 1 < hi(); ++d) {
      IntegerMatrix a = delta(d).to_dense();
      IntegerMatrix b = delta(d + 1).to_dense();
      if (!(b * a).is_zero()) return false;
    }
    return true;
  }

 private:
  int lo_ = 0;
  std::vector<long> ranks_;
  std::vector<SparseIntMatrix> deltas_;
};

// H^d = ker(delta_d) / im(delta_{d-1}), computed from two Smith forms:
// the torsion of H^d equals the torsion of coker(delta_{d-1}) (torsion
// classes are automatically cocycles), and the free rank is
// nullity(delta_d) - rank(delta_{d-1}).
inline FgAbelianGroup cochain_cohomology(const CochainComplexZ& c, int d) {
  if (d < c.lo() || d > c.hi()) throw std::out_of_range("degree outside complex window");
  std::vector<Int> below_inv;
  if (c.has_delta(d - 1)) {
    SparseIntMatrix m = c.delta(d - 1);
    below_inv = std::move(m).invariants();
  }
  long rank_below = static_cast<long>(below_inv.size());
  long rank_here = 0;
  if (c.has_delta(d)) {
    SparseIntMatrix m = c.delta(d);
    rank_here = std::move(m).rank();
  }
  const long free_rank = c.rank(d) - rank_here - rank_below;
  if (free_rank < 0) throw std::logic_error("not a complex at degree " + std::to_string(d));
  return FgAbelianGroup::make(free_rank, std::move(below_inv));
}

inline long torsion_length(const FgAbelianGroup& g, const Int& p) {
  return g.torsion_length(p);
}

}  // namespace eqco::exactalg
