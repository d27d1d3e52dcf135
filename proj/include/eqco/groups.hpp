// Finite groups from family specifications, subgroup enumeration, and the
// minimal-nonabelian classification machinery.
#pragma once

#include <eqco/exactalg.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace eqco::groups {

using exactalg::FgAbelianGroup;
using exactalg::Int;

// ---------------------------------------------------------------------------
// GroupSpec

struct GroupSpec {
  enum class Family {
    Cyclic,            // n
    ElementaryAbelian, // p, r
    Metacyclic,        // m, n, k : Z_m x|_k Z_n with b^-1 a b = a^k
    Quaternion8,
    G1,                // m, n, p
    G2,                // m, n, p
    EPQ,               // p, r, q, n, matrix A : (Z_p)^r x|_A Z_{q^n}, b v b^-1 = A v
    DirectProduct,     // factors
  };

  Family family = Family::Cyclic;
  long n = 0, m = 0, k = 0, p = 0, r = 0, q = 0;
  std::vector<std::vector<long>> matrix;
  std::vector<GroupSpec> factors;

  static GroupSpec cyclic(long n) {
    GroupSpec s;
    s.family = Family::Cyclic;
    s.n = n;
    return s;
  }
  static GroupSpec elementary_abelian(long p, long r) {
    GroupSpec s;
    s.family = Family::ElementaryAbelian;
    s.p = p;
    s.r = r;
    return s;
  }
  static GroupSpec metacyclic(long m, long n, long k) {
    GroupSpec s;
    s.family = Family::Metacyclic;
    s.m = m;
    s.n = n;
    s.k = k;
    return s;
  }
  // D_n is sugar for Metacyclic(n, 2, n-1).
  static GroupSpec dihedral(long n) { return metacyclic(n, 2, n - 1); }
  static GroupSpec quaternion8() {
    GroupSpec s;
    s.family = Family::Quaternion8;
    return s;
  }
  static GroupSpec g1(long m, long n, long p) {
    GroupSpec s;
    s.family = Family::G1;
    s.m = m;
    s.n = n;
    s.p = p;
    return s;
  }
  static GroupSpec g2(long m, long n, long p) {
    GroupSpec s;
    s.family = Family::G2;
    s.m = m;
    s.n = n;
    s.p = p;
    return s;
  }
  static GroupSpec epq(long p, long r, long q, long n, std::vector<std::vector<long>> a) {
    GroupSpec s;
    s.family = Family::EPQ;
    s.p = p;
    s.r = r;
    s.q = q;
    s.n = n;
    s.matrix = std::move(a);
    return s;
  }
  static GroupSpec direct_product(std::vector<GroupSpec> fs) {
    GroupSpec s;
    s.family = Family::DirectProduct;
    s.factors = std::move(fs);
    return s;
  }

  bool operator==(const GroupSpec& o) const {
    return family == o.family && n == o.n && m == o.m && k == o.k && p == o.p && r == o.r &&
           q == o.q && matrix == o.matrix && factors == o.factors;
  }

  // Printed in the CLI grammar; parse(to_string()) round-trips.
  std::string to_string() const {
    std::ostringstream os;
    switch (family) {
      case Family::Cyclic:
        os << "C" << n;
        break;
      case Family::ElementaryAbelian:
        os << "E(" << p << "," << r << ")";
        break;
      case Family::Metacyclic:
        os << "MC(" << m << ";" << n << ";" << k << ")";
        break;
      case Family::Quaternion8:
        os << "Q8";
        break;
      case Family::G1:
        os << "G1(" << m << "," << n << "," << p << ")";
        break;
      case Family::G2:
        os << "G2(" << m << "," << n << "," << p << ")";
        break;
      case Family::EPQ: {
        os << "EPQ(" << p << "," << r << ";" << q << "," << n << ";[";
        for (size_t i = 0; i < matrix.size(); ++i) {
          os << (i ? "," : "") << "[";
          for (size_t j = 0; j < matrix[i].size(); ++j) os << (j ? "," : "") << matrix[i][j];
          os << "]";
        }
        os << "])";
        break;
      }
      case Family::DirectProduct:
        for (size_t i = 0; i < factors.size(); ++i) os << (i ? "x" : "") << factors[i].to_string();
        break;
    }
    return os.str();
  }
};

namespace detail {

inline long pow_mod(long base, long exp, long mod) {
  long r = 1 % mod;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

inline long inverse_mod(long a, long m) {
  long t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
  while (nr != 0) {
    long q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  if (r != 1) throw std::invalid_argument("not invertible mod m");
  return ((t % m) + m) % m;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long ipow(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FiniteGroup

class FiniteGroup {
 public:
  FiniteGroup(long order, std::vector<int> table, std::vector<std::pair<std::string, int>> gens,
              GroupSpec spec)
      : n_(order), table_(std::move(table)), gens_(std::move(gens)), spec_(std::move(spec)) {
    if (static_cast<long>(table_.size()) != n_ * n_)
      throw std::invalid_argument("multiplication table size mismatch");
    validate();
  }

  long order() const { return n_; }
  int op(int x, int y) const { return table_[static_cast<size_t>(x) * n_ + y]; }
  int identity() const { return id_; }
  int inv(int x) const { return inv_[x]; }
  const GroupSpec& spec() const { return spec_; }
  const std::vector<std::pair<std::string, int>>& generators() const { return gens_; }

  int generator(const std::string& name) const {
    for (auto& [s, i] : gens_)
      if (s == name) return i;
    throw std::out_of_range("no generator named " + name);
  }

  int power(int x, long e) const {
    if (e < 0) return power(inv_[x], -e);
    int r = id_;
    while (e-- > 0) r = op(r, x);
    return r;
  }

  long element_order(int x) const {
    long k = 1;
    int y = x;
    while (y != id_) {
      y = op(y, x);
      ++k;
    }
    return k;
  }

  bool is_abelian() const {
    for (int x = 0; x < n_; ++x)
      for (int y = x + 1; y < n_; ++y)
        if (op(x, y) != op(y, x)) return false;
    return true;
  }

  std::vector<int> center() const {
    std::vector<int> c;
    for (int x = 0; x < n_; ++x) {
      bool central = true;
      for (int y = 0; y < n_ && central; ++y) central = op(x, y) == op(y, x);
      if (central) c.push_back(x);
    }
    return c;
  }

  // Word in generator names evaluated left to right; "a^-1" style not
  // supported — use explicit inverses via inv().
  int eval(std::initializer_list<std::string> word) const {
    int r = id_;
    for (auto& w : word) r = op(r, generator(w));
    return r;
  }

  // Subgroup generated by a set of elements (sorted element list).
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const {
    std::vector<char> in(n_, 0);
    std::vector<int> stack{id_};
    in[id_] = 1;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int g : gens) {
        int y = op(x, g);
        if (!in[y]) {
          in[y] = 1;
          stack.push_back(y);
        }
      }
    }
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (in[i]) out.push_back(i);
    return out;
  }

  std::vector<std::vector<int>> conjugacy_classes() const {
    std::vector<char> seen(n_, 0);
    std::vector<std::vector<int>> classes;
    for (int x = 0; x < n_; ++x) {
      if (seen[x]) continue;
      std::set<int> cls;
      for (int g = 0; g < n_; ++g) cls.insert(op(op(g, x), inv_[g]));
      std::vector<int> v(cls.begin(), cls.end());
      for (int y : v) seen[y] = 1;
      classes.push_back(std::move(v));
    }
    return classes;
  }

  // Commutator subgroup [G,G] as a sorted element list.
  std::vector<int> derived_subgroup() const {
    std::vector<int> comms;
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        comms.push_back(op(op(inv_[x], inv_[y]), op(x, y)));
    std::sort(comms.begin(), comms.end());
    comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
    return generated_subgroup(comms);
  }

 private:
  void validate() {
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y) {
        int v = op(x, y);
        if (v < 0 || v >= n_) throw std::invalid_argument("table entry out of range");
      }
    // identity
    id_ = -1;
    for (int e = 0; e < n_; ++e) {
      bool ok = true;
      for (int x = 0; x < n_ && ok; ++x) ok = op(e, x) == x && op(x, e) == x;
      if (ok) {
        id_ = e;
        break;
      }
    }
    if (id_ < 0) throw std::invalid_argument("no identity element");
    // inverses
    inv_.assign(n_, -1);
    for (int x = 0; x < n_; ++x) {
      for (int y = 0; y < n_; ++y)
        if (op(x, y) == id_ && op(y, x) == id_) {
          inv_[x] = y;
          break;
        }
      if (inv_[x] < 0) throw std::invalid_argument("missing inverse");
    }
    // associativity (full check; groups here are small)
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        for (int z = 0; z < n_; ++z)
          if (op(op(x, y), z) != op(x, op(y, z)))
            throw std::invalid_argument("table not associative");
    // generators generate
    std::vector<int> gset;
    for (auto& [s, i] : gens_) gset.push_back(i);
    if (static_cast<long>(generated_subgroup(gset).size()) != n_)
      throw std::invalid_argument("declared generators do not generate the group");
  }

  long n_;
  std::vector<int> table_;
  int id_ = 0;
  std::vector<int> inv_;
  std::vector<std::pair<std::string, int>> gens_;
  GroupSpec spec_;
};

// ---------------------------------------------------------------------------
// build_group

namespace detail {

struct TableBuilder {
  long n = 0;
  std::vector<int> table;
  std::vector<std::pair<std::string, int>> gens;
};

inline TableBuilder build_cyclic(long n) {
  if (n < 1) throw std::invalid_argument("Cyclic order must be >= 1");
  TableBuilder t;
  t.n = n;
  t.table.resize(n * n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) t.table[i * n + j] = static_cast<int>((i + j) % n);
  t.gens = {{"a", static_cast<int>(n > 1 ? 1 : 0)}};
  return t;
}

inline TableBuilder build_elementary_abelian(long p, long r) {
  if (!is_prime(p)) throw std::invalid_argument("ElementaryAbelian: p must be prime");
  if (r < 1) throw std::invalid_argument("ElementaryAbelian: r must be >= 1");
  long n = ipow(p, r);
  if (n > 100000) throw std::invalid_argument("ElementaryAbelian: order too large");
  TableBuilder t;
  t.n = n;
  t.table.resize(n * n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      long x = i, y = j, out = 0, mul = 1;
      for (long d = 0; d < r; ++d) {
        out += (x % p + y % p) % p * mul;
        x /= p;
        y /= p;
        mul *= p;
      }
      t.table[i * n + j] = static_cast<int>(out);
    }
  long mul = 1;
  for (long d = 0; d < r; ++d) {
    t.gens.emplace_back("a" + std::to_string(d + 1), static_cast<int>(mul));
    mul *= p;
  }
  return t;
}

// Z_m x| Z_n with b^-1 a b = a^k. Element a^i b^j encoded as i*n + j;
// (a^i1 b^j1)(a^i2 b^j2) = a^{i1 + i2 k^{-j1}} b^{j1+j2}.
inline TableBuilder build_metacyclic(long m, long n, long k) {
  if (m < 1 || n < 1) throw std::invalid_argument("Metacyclic: orders must be >= 1");
  k = ((k % m) + m) % m;
  if (m > 1 && std::gcd(k, m) != 1) throw std::invalid_argument("Metacyclic: k not a unit mod m");
  if (m > 1 && pow_mod(k, n, m) != 1)
    throw std::invalid_argument("Metacyclic: k^n != 1 mod m");
  long kin = m > 1 ? inverse_mod(k, m) : 0;
  long order = m * n;
  TableBuilder t;
  t.n = order;
  t.table.resize(order * order);
  // precompute kin^j mod m
  std::vector<long> kinp(n);
  for (long j = 0; j < n; ++j) kinp[j] = m > 1 ? pow_mod(kin, j, m) : 0;
  for (long i1 = 0; i1 < m; ++i1)
    for (long j1 = 0; j1 < n; ++j1)
      for (long i2 = 0; i2 < m; ++i2)
        for (long j2 = 0; j2 < n; ++j2) {
          long i = m > 1 ? (i1 + i2 * kinp[j1]) % m : 0;
          long j = (j1 + j2) % n;
          t.table[(i1 * n + j1) * order + (i2 * n + j2)] = static_cast<int>(i * n + j);
        }
  t.gens = {{"a", static_cast<int>(m > 1 ? n : 0)}, {"b", static_cast<int>(n > 1 ? 1 : 0)}};
  return t;
}

// Quaternion units 1,-1,i,-i,j,-j,k,-k at indices 0..7. a = i, b = j.
inline TableBuilder build_quaternion8() {
  auto enc = [](int sign, int axis) { return (sign < 0 ? 1 : 0) + 2 * axis; };  // axis 0=1,1=i,2=j,3=k
  TableBuilder t;
  t.n = 8;
  t.table.resize(64);
  // quaternion multiplication on basis units
  auto mul = [&](int x, int y) {
    int sx = (x & 1) ? -1 : 1, ax = x >> 1;
    int sy = (y & 1) ? -1 : 1, ay = y >> 1;
    // table of axis products: res_axis, res_sign
    static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    return enc(sx * sy * sign[ax][ay], axis[ax][ay]);
  };
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) t.table[x * 8 + y] = mul(x, y);
  t.gens = {{"a", enc(1, 1)}, {"b", enc(1, 2)}};
  return t;
}

// (Z_p)^r x|_A Z_{q^n} with b v b^-1 = A v. Element (v, j) encoded as
// vindex * q^n + j where vindex is base-p; product
// (v1, j1)(v2, j2) = (v1 + A^{j1} v2, j1 + j2).
inline TableBuilder build_epq(long p, long r, long q, long n,
                              const std::vector<std::vector<long>>& a) {
  if (!is_prime(p) || !is_prime(q)) throw std::invalid_argument("EPQ: p, q must be prime");
  if (r < 1 || n < 1) throw std::invalid_argument("EPQ: r, n must be >= 1");
  if (static_cast<long>(a.size()) != r) throw std::invalid_argument("EPQ: matrix must be r x r");
  for (auto& row : a)
    if (static_cast<long>(row.size()) != r) throw std::invalid_argument("EPQ: matrix must be r x r");
  long qn = ipow(q, n), pr = ipow(p, r);
  long order = pr * qn;
  if (order > 100000) throw std::invalid_argument("EPQ: order too large");

  using Mat = std::vector<std::vector<long>>;
  auto matmul = [&](const Mat& x, const Mat& y) {
    Mat z(r, std::vector<long>(r, 0));
    for (long i = 0; i < r; ++i)
      for (long kk = 0; kk < r; ++kk)
        for (long j = 0; j < r; ++j) z[i][j] = (z[i][j] + x[i][kk] * y[kk][j]) % p;
    return z;
  };
  Mat id(r, std::vector<long>(r, 0));
  for (long i = 0; i < r; ++i) id[i][i] = 1;
  Mat amod(r, std::vector<long>(r));
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j) amod[i][j] = ((a[i][j] % p) + p) % p;
  // powers A^0 .. A^{qn-1}, and check A^{qn} = I (implies invertibility)
  std::vector<Mat> apow{id};
  for (long j = 1; j <= qn; ++j) apow.push_back(matmul(apow.back(), amod));
  if (apow[qn] != id) throw std::invalid_argument("EPQ: A^(q^n) != identity mod p");

  auto decode = [&](long vi) {
    std::vector<long> v(r);
    for (long d = 0; d < r; ++d) {
      v[d] = vi % p;
      vi /= p;
    }
    return v;
  };
  auto encode = [&](const std::vector<long>& v) {
    long vi = 0, mul = 1;
    for (long d = 0; d < r; ++d) {
      vi += v[d] * mul;
      mul *= p;
    }
    return vi;
  };

  TableBuilder t;
  t.n = order;
  t.table.resize(order * order);
  for (long v1 = 0; v1 < pr; ++v1) {
    std::vector<long> w1 = decode(v1);
    for (long j1 = 0; j1 < qn; ++j1)
      for (long v2 = 0; v2 < pr; ++v2) {
        std::vector<long> w2 = decode(v2);
        std::vector<long> w(r, 0);
        for (long i = 0; i < r; ++i) {
          long s = w1[i];
          for (long j = 0; j < r; ++j) s += apow[j1][i][j] * w2[j];
          w[i] = s % p;
        }
        long v = encode(w);
        for (long j2 = 0; j2 < qn; ++j2)
          t.table[(v1 * qn + j1) * order + (v2 * qn + j2)] =
              static_cast<int>(v * qn + (j1 + j2) % qn);
      }
  }
  if (r == 1) {
    t.gens = {{"a", static_cast<int>(qn)}, {"b", 1}};
  } else {
    long mul = 1;
    for (long d = 0; d < r; ++d) {
      t.gens.emplace_back("a" + std::to_string(d + 1), static_cast<int>(mul * qn));
      mul *= p;
    }
    t.gens.emplace_back("b", 1);
  }
  return t;
}

// G2(m,n,p) = <a,b,c | a^{p^m} = b^{p^n} = c^p = 1, [a,b] = c, c central>.
// Element a^i b^j c^l as (i, j, l); the normal-form product picks up the
// central cocycle (i1,j1,l1)(i2,j2,l2) = (i1+i2, j1+j2, l1+l2 - i2*j1 mod p).
inline TableBuilder build_g2(long m, long n, long p) {
  if (!is_prime(p)) throw std::invalid_argument("G2: p must be prime");
  if (m < 1 || n < 1) throw std::invalid_argument("G2: m, n must be >= 1");
  long pm = ipow(p, m), pn = ipow(p, n);
  long order = pm * pn * p;
  if (order > 100000) throw std::invalid_argument("G2: order too large");
  TableBuilder t;
  t.n = order;
  t.table.resize(order * order);
  auto idx = [&](long i, long j, long l) { return (i * pn + j) * p + l; };
  for (long i1 = 0; i1 < pm; ++i1)
    for (long j1 = 0; j1 < pn; ++j1)
      for (long l1 = 0; l1 < p; ++l1)
        for (long i2 = 0; i2 < pm; ++i2)
          for (long j2 = 0; j2 < pn; ++j2) {
            long i = (i1 + i2) % pm, j0 = j1;
            long lbase = ((l1 - i2 * j0) % p + p * (1 + i2)) % p;
            for (long l2 = 0; l2 < p; ++l2)
              t.table[idx(i1, j1, l1) * order + idx(i2, j2, l2)] =
                  static_cast<int>(idx(i, (j1 + j2) % pn, (lbase + l2) % p));
          }
  t.gens = {{"a", static_cast<int>(idx(1, 0, 0))},
            {"b", static_cast<int>(idx(0, 1, 0))},
            {"c", static_cast<int>(idx(0, 0, 1))}};
  return t;
}

inline TableBuilder build_direct_product(const TableBuilder& x, const TableBuilder& y,
                                         int factor_index) {
  TableBuilder t;
  t.n = x.n * y.n;
  t.table.resize(t.n * t.n);
  auto idx = [&](long i, long j) { return i * y.n + j; };
  for (long i1 = 0; i1 < x.n; ++i1)
    for (long j1 = 0; j1 < y.n; ++j1)
      for (long i2 = 0; i2 < x.n; ++i2)
        for (long j2 = 0; j2 < y.n; ++j2)
          t.table[idx(i1, j1) * t.n + idx(i2, j2)] =
              static_cast<int>(idx(x.table[i1 * x.n + i2], y.table[j1 * y.n + j2]));
  for (auto& [s, g] : x.gens) t.gens.emplace_back(s, static_cast<int>(g * y.n));
  for (auto& [s, g] : y.gens)
    t.gens.emplace_back(s + "'" + std::to_string(factor_index), g);
  return t;
}

inline TableBuilder build_table(const GroupSpec& spec) {
  switch (spec.family) {
    case GroupSpec::Family::Cyclic:
      return build_cyclic(spec.n);
    case GroupSpec::Family::ElementaryAbelian:
      return build_elementary_abelian(spec.p, spec.r);
    case GroupSpec::Family::Metacyclic:
      return build_metacyclic(spec.m, spec.n, spec.k);
    case GroupSpec::Family::Quaternion8:
      return build_quaternion8();
    case GroupSpec::Family::G1: {
      if (spec.m < 2) throw std::invalid_argument("G1: m must be >= 2");
      if (!is_prime(spec.p)) throw std::invalid_argument("G1: p must be prime");
      // G1(m,n,p) = Metacyclic(p^m, p^n, 1 + p^{m-1})
      long pm = ipow(spec.p, spec.m), pn = ipow(spec.p, spec.n);
      return build_metacyclic(pm, pn, 1 + ipow(spec.p, spec.m - 1));
    }
    case GroupSpec::Family::G2:
      return build_g2(spec.m, spec.n, spec.p);
    case GroupSpec::Family::EPQ:
      return build_epq(spec.p, spec.r, spec.q, spec.n, spec.matrix);
    case GroupSpec::Family::DirectProduct: {
      if (spec.factors.empty()) throw std::invalid_argument("empty direct product");
      TableBuilder t = build_table(spec.factors[0]);
      for (size_t i = 1; i < spec.factors.size(); ++i)
        t = build_direct_product(t, build_table(spec.factors[i]), static_cast<int>(i + 1));
      return t;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

inline FiniteGroup build_group(const GroupSpec& spec) {
  detail::TableBuilder t = detail::build_table(spec);
  // deduplicate generator indices (e.g. C1 factors collapsing to identity)
  std::vector<std::pair<std::string, int>> gens;
  for (auto& g : t.gens) gens.push_back(g);
  return FiniteGroup(t.n, std::move(t.table), std::move(gens), spec);
}

// ---------------------------------------------------------------------------
// Subgroup enumeration (order <= 64, bitmask sets)

namespace detail {

inline uint64_t closure_mask(const FiniteGroup& g, uint64_t seed) {
  const long n = g.order();
  uint64_t mask = seed | (1ull << g.identity());
  for (;;) {
    uint64_t next = mask;
    for (long x = 0; x < n; ++x) {
      if (!(mask >> x & 1)) continue;
      for (long y = 0; y < n; ++y)
        if (mask >> y & 1) next |= 1ull << g.op(static_cast<int>(x), static_cast<int>(y));
    }
    if (next == mask) return mask;
    mask = next;
  }
}

}  // namespace detail

inline std::vector<std::vector<int>> all_subgroups(const FiniteGroup& g, long bound = 64) {
  const long n = g.order();
  if (n > bound || n > 64) throw std::invalid_argument("subgroup enumeration: order bound exceeded");
  std::set<uint64_t> subs;
  // cyclic subgroups
  for (int x = 0; x < n; ++x) subs.insert(detail::closure_mask(g, 1ull << x));
  // close under join
  for (;;) {
    std::set<uint64_t> next = subs;
    for (uint64_t a : subs)
      for (uint64_t b : subs) {
        if (a == b) continue;
        next.insert(detail::closure_mask(g, a | b));
      }
    if (next.size() == subs.size()) break;
    subs = std::move(next);
  }
  std::vector<std::vector<int>> out;
  for (uint64_t m : subs) {
    std::vector<int> v;
    for (long i = 0; i < n; ++i)
      if (m >> i & 1) v.push_back(static_cast<int>(i));
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());  // deterministic lexicographic order
  return out;
}

inline bool subset_is_abelian(const FiniteGroup& g, const std::vector<int>& h) {
  for (size_t i = 0; i < h.size(); ++i)
    for (size_t j = i + 1; j < h.size(); ++j)
      if (g.op(h[i], h[j]) != g.op(h[j], h[i])) return false;
  return true;
}

inline bool is_minimal_nonabelian(const FiniteGroup& g) {
  if (g.is_abelian()) return false;
  for (auto& h : all_subgroups(g)) {
    if (static_cast<long>(h.size()) == g.order()) continue;
    if (!subset_is_abelian(g, h)) return false;
  }
  return true;
}

// Max r such that (Z_p)^r embeds in G, over all primes p. Searched by
// extending elementary abelian subgroups one commuting order-p element at a
// time; no order bound needed.
inline long elementary_abelian_rank(const FiniteGroup& g) {
  const long n = g.order();
  long best = 0;
  std::set<long> primes;
  for (int x = 0; x < n; ++x) {
    long o = g.element_order(x);
    if (detail::is_prime(o)) primes.insert(o);
  }
  for (long p : primes) {
    std::vector<int> porder;  // elements of order p
    for (int x = 0; x < n; ++x)
      if (g.element_order(x) == p) porder.push_back(x);
    std::set<std::vector<int>> seen;
    // DFS over elementary abelian subgroups, extending by commuting elements
    std::vector<std::pair<std::vector<int>, long>> stack{{{g.identity()}, 0}};
    while (!stack.empty()) {
      auto [h, rank] = stack.back();
      stack.pop_back();
      best = std::max(best, rank);
      for (int x : porder) {
        if (std::binary_search(h.begin(), h.end(), x)) continue;
        bool commutes = true;
        for (int y : h)
          if (g.op(x, y) != g.op(y, x)) {
            commutes = false;
            break;
          }
        if (!commutes) continue;
        // extended subgroup = h * <x>
        std::set<int> ext;
        for (int y : h)
          for (int e = 0, z = y; e < p; ++e, z = g.op(z, x)) ext.insert(z);
        std::vector<int> h2(ext.begin(), ext.end());
        if (seen.insert(h2).second) stack.push_back({std::move(h2), rank + 1});
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Structure of abelian (sub)groups from the table

// Invariant-factor decomposition of an abelian group given as a closed
// subset of G (recovered from element-order counts per prime).
inline FgAbelianGroup abelian_structure(const FiniteGroup& g, const std::vector<int>& h) {
  if (!subset_is_abelian(g, h)) throw std::invalid_argument("subset not abelian");
  long n = static_cast<long>(h.size());
  std::map<long, std::vector<int>> partitions;  // p -> descending valuations
  long rem = n;
  for (long p = 2; rem > 1; ++p) {
    if (!detail::is_prime(p) || rem % p != 0) continue;
    while (rem % p == 0) rem /= p;
    // c_k = #{x in h : x^{p^k} = e} ; log_p(c_k/c_{k-1}) = #{i : lambda_i >= k}
    std::vector<long> mult(1, 1);
    for (long k = 1;; ++k) {
      long pk = detail::ipow(p, k);
      long c = 0;
      for (int x : h)
        if (g.power(x, pk) == g.identity()) ++c;
      mult.push_back(c);
      if (c == mult[k - 1]) break;
    }
    std::vector<int> lam;
    for (size_t k = 1; k < mult.size(); ++k) {
      long ratio = mult[k] / mult[k - 1];
      long cnt = 0;
      while (ratio > 1) {
        ratio /= p;
        ++cnt;
      }
      // cnt = number of lambda_i >= k
      for (long i = 0; i < cnt; ++i) {
        if (static_cast<long>(lam.size()) <= i) lam.push_back(0);
        lam[i] = static_cast<int>(k);
      }
    }
    if (!lam.empty()) partitions[p] = lam;
  }
  std::vector<Int> factors;
  for (auto& [p, lam] : partitions)
    for (int e : lam) factors.push_back(Int(detail::ipow(p, e)));
  return FgAbelianGroup::make(0, std::move(factors));
}

inline FgAbelianGroup abelianization(const FiniteGroup& g) {
  std::vector<int> d = g.derived_subgroup();
  // coset representatives and quotient "order of coset" counting
  const long n = g.order();
  std::vector<int> rep(n, -1);  // element -> canonical coset rep (min element)
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    if (rep[x] >= 0) continue;
    std::vector<int> coset;
    for (int y : d) coset.push_back(g.op(x, y));
    int r = *std::min_element(coset.begin(), coset.end());
    for (int y : coset) rep[y] = r;
    reps.push_back(r);
  }
  std::sort(reps.begin(), reps.end());
  // quotient table on reps
  std::map<int, int> idx;
  for (size_t i = 0; i < reps.size(); ++i) idx[reps[i]] = static_cast<int>(i);
  long q = static_cast<long>(reps.size());
  std::vector<int> table(q * q);
  for (long i = 0; i < q; ++i)
    for (long j = 0; j < q; ++j) table[i * q + j] = idx[rep[g.op(reps[i], reps[j])]];
  std::vector<std::pair<std::string, int>> gens;
  for (long i = 0; i < q; ++i) gens.emplace_back("x" + std::to_string(i), static_cast<int>(i));
  FiniteGroup quot(q, std::move(table), std::move(gens), GroupSpec::cyclic(0));
  std::vector<int> all(q);
  std::iota(all.begin(), all.end(), 0);
  return abelian_structure(quot, all);
}

// ---------------------------------------------------------------------------
// Fingerprints and minimal-nonabelian classification

// Invariant fingerprint used instead of general isomorphism testing;
// adequate at catalog scale (documented limitation).
struct Fingerprint {
  long order = 0;
  FgAbelianGroup abelianization;
  std::vector<long> conj_class_sizes;  // sorted
  std::vector<long> element_orders;    // sorted
  std::vector<long> subgroup_orders;   // sorted; empty when order > 64

  bool operator==(const Fingerprint& o) const {
    return order == o.order && abelianization == o.abelianization &&
           conj_class_sizes == o.conj_class_sizes && element_orders == o.element_orders &&
           subgroup_orders == o.subgroup_orders;
  }
};

inline Fingerprint fingerprint(const FiniteGroup& g) {
  Fingerprint f;
  f.order = g.order();
  f.abelianization = abelianization(g);
  for (auto& c : g.conjugacy_classes()) f.conj_class_sizes.push_back(static_cast<long>(c.size()));
  std::sort(f.conj_class_sizes.begin(), f.conj_class_sizes.end());
  for (int x = 0; x < g.order(); ++x) f.element_orders.push_back(g.element_order(x));
  std::sort(f.element_orders.begin(), f.element_orders.end());
  if (g.order() <= 64) {
    for (auto& h : all_subgroups(g)) f.subgroup_orders.push_back(static_cast<long>(h.size()));
    std::sort(f.subgroup_orders.begin(), f.subgroup_orders.end());
  }
  return f;
}

struct MinimalNonabelianClass {
  enum class Tag { PGroupType1, PGroupType2, Quaternion, SemidirectEPQ, NotMinimalNonabelian, Abelian };
  Tag tag = Tag::Abelian;
  long m = 0, n = 0, p = 0, r = 0, q = 0;

  bool operator==(const MinimalNonabelianClass& o) const {
    return tag == o.tag && m == o.m && n == o.n && p == o.p && r == o.r && q == o.q;
  }

  std::string to_string() const {
    std::ostringstream os;
    switch (tag) {
      case Tag::PGroupType1:
        os << "PGroupType1(" << m << "," << n << "," << p << ")";
        break;
      case Tag::PGroupType2:
        os << "PGroupType2(" << m << "," << n << "," << p << ")";
        break;
      case Tag::Quaternion:
        os << "Quaternion";
        break;
      case Tag::SemidirectEPQ:
        os << "SemidirectEPQ(" << p << "," << r << "," << q << "," << n << ")";
        break;
      case Tag::NotMinimalNonabelian:
        os << "NotMinimalNonabelian";
        break;
      case Tag::Abelian:
        os << "Abelian";
        break;
    }
    return os.str();
  }
};

inline MinimalNonabelianClass classify_minimal_nonabelian(const FiniteGroup& g) {
  MinimalNonabelianClass c;
  if (g.is_abelian()) {
    c.tag = MinimalNonabelianClass::Tag::Abelian;
    return c;
  }
  if (!is_minimal_nonabelian(g)) {
    c.tag = MinimalNonabelianClass::Tag::NotMinimalNonabelian;
    return c;
  }
  const long order = g.order();
  std::vector<std::pair<long, long>> pf;  // (prime, exponent)
  long rem = order;
  for (long p = 2; rem > 1; ++p) {
    if (rem % p != 0) continue;
    long e = 0;
    while (rem % p == 0) {
      rem /= p;
      ++e;
    }
    pf.emplace_back(p, e);
  }
  Fingerprint fg = fingerprint(g);
  if (pf.size() == 1) {
    long p = pf[0].first, e = pf[0].second;
    // quaternion: order 8, a single involution
    if (order == 8 &&
        std::count(fg.element_orders.begin(), fg.element_orders.end(), 2) == 1) {
      c.tag = MinimalNonabelianClass::Tag::Quaternion;
      return c;
    }
    // match Type 1: order p^{m+n}, m >= 2
    for (long m = 2; m < e; ++m) {
      long n = e - m;
      if (n < 1) continue;
      if (fingerprint(build_group(GroupSpec::g1(m, n, p))) == fg) {
        c.tag = MinimalNonabelianClass::Tag::PGroupType1;
        c.m = m;
        c.n = n;
        c.p = p;
        return c;
      }
    }
    // match Type 2: order p^{m+n+1}
    for (long m = 1; m <= e - 2; ++m) {
      long n = e - 1 - m;
      if (n < 1 || n > m) continue;  // (m,n) and (n,m) give isomorphic groups
      if (fingerprint(build_group(GroupSpec::g2(m, n, p))) == fg) {
        c.tag = MinimalNonabelianClass::Tag::PGroupType2;
        c.m = m;
        c.n = n;
        c.p = p;
        return c;
      }
    }
    c.tag = MinimalNonabelianClass::Tag::NotMinimalNonabelian;  // unmatched (unexpected)
    return c;
  }
  if (pf.size() == 2) {
    // (Z_p)^r x| Z_{q^n}: the normal Sylow subgroup is elementary abelian
    for (int which : {0, 1}) {
      long p = pf[which].first, a = pf[which].second;
      long q = pf[1 - which].first, b = pf[1 - which].second;
      // P = set of p-power-order elements; normal Sylow iff it is a subgroup
      std::vector<int> pelems;
      for (int x = 0; x < order; ++x) {
        long o = g.element_order(x);
        while (o % p == 0) o /= p;
        if (o == 1) pelems.push_back(x);
      }
      if (static_cast<long>(pelems.size()) != detail::ipow(p, a)) continue;
      bool closed = true;
      for (size_t i = 0; i < pelems.size() && closed; ++i)
        for (size_t j = 0; j < pelems.size() && closed; ++j)
          closed = std::binary_search(pelems.begin(), pelems.end(), g.op(pelems[i], pelems[j]));
      if (!closed) continue;
      // elementary abelian?
      bool ea = subset_is_abelian(g, pelems);
      for (int x : pelems)
        if (ea && x != g.identity() && g.element_order(x) != p) ea = false;
      if (!ea) continue;
      c.tag = MinimalNonabelianClass::Tag::SemidirectEPQ;
      c.p = p;
      c.r = a;
      c.q = q;
      c.n = b;
      return c;
    }
  }
  c.tag = MinimalNonabelianClass::Tag::NotMinimalNonabelian;
  return c;
}

// ---------------------------------------------------------------------------
// Exponent-lemma search
//
// Enumerates abelian p-groups K up to max_order and automorphisms sigma of
// prime order q != p that are trivial on every proper sigma-invariant
// subgroup, and returns those where K has exponent > p (counterexamples to
// the lemma; the correct result is the empty list).
//
// Full automorphism enumeration is infeasible at the top of the range, but
// the hypothesis itself pins sigma down: pK and the subgroup of elements of
// order < exponent(K) are proper characteristic subgroups, so sigma fixes
// them pointwise. That forces sigma(a_i) = a_i for generators of non-maximal
// order and sigma(a_i) = a_i + x_i with p*x_i = 0 for the rest, leaving a
// small explicit candidate list which is then checked honestly.

struct ExponentLemmaCounterexample {
  long p = 0, q = 0;
  std::vector<int> partition;             // K = prod Z_{p^{partition[i]}}
  std::vector<std::vector<long>> images;  // sigma(a_i) in generator coordinates
};

namespace detail {

// elements of K = prod Z_{p^{lam_i}} as coefficient vectors
struct AbelianPGroup {
  long p;
  std::vector<int> lam;
  std::vector<long> mod;  // p^{lam_i}

  AbelianPGroup(long p_, std::vector<int> lam_) : p(p_), lam(std::move(lam_)) {
    for (int e : lam) mod.push_back(ipow(p, e));
  }
  long size() const {
    long s = 1;
    for (long m : mod) s *= m;
    return s;
  }
  std::vector<long> decode(long idx) const {
    std::vector<long> v(mod.size());
    for (size_t i = 0; i < mod.size(); ++i) {
      v[i] = idx % mod[i];
      idx /= mod[i];
    }
    return v;
  }
  long encode(const std::vector<long>& v) const {
    long idx = 0, mul = 1;
    for (size_t i = 0; i < mod.size(); ++i) {
      idx += ((v[i] % mod[i] + mod[i]) % mod[i]) * mul;
      mul *= mod[i];
    }
    return idx;
  }
  long add(long a, long b) const {
    std::vector<long> x = decode(a), y = decode(b);
    for (size_t i = 0; i < x.size(); ++i) x[i] = (x[i] + y[i]) % mod[i];
    return encode(x);
  }
  long element_order(long a) const {
    std::vector<long> x = decode(a);
    long o = 1;
    for (size_t i = 0; i < x.size(); ++i) {
      long m = mod[i] / std::gcd(x[i], mod[i]);
      o = std::lcm(o, m);
    }
    return o;
  }
};

// sigma given by generator images; apply to arbitrary element by linearity
inline long apply_endo(const AbelianPGroup& k, const std::vector<long>& gen_images, long a) {
  std::vector<long> x = k.decode(a);
  long out = k.encode(std::vector<long>(k.lam.size(), 0));
  for (size_t i = 0; i < x.size(); ++i) {
    long img = gen_images[i];
    for (long c = 0; c < x[i]; ++c) out = k.add(out, img);
  }
  return out;
}

inline bool hypothesis_holds(const AbelianPGroup& k, const std::vector<long>& sigma_of) {
  // sigma_of: full table. Check sigma trivial on every proper invariant
  // subgroup: enumerate subgroups as closures of element subsets is too much;
  // instead enumerate cyclic-generated sigma-invariant closures and join.
  const long n = k.size();
  std::set<std::vector<long>> subs;
  auto closure = [&](std::vector<long> seed) {
    std::set<long> in(seed.begin(), seed.end());
    in.insert(k.encode(std::vector<long>(k.lam.size(), 0)));
    std::vector<long> stack(in.begin(), in.end());
    while (!stack.empty()) {
      long x = stack.back();
      stack.pop_back();
      for (long y : std::vector<long>(in.begin(), in.end())) {
        long z = k.add(x, y);
        if (in.insert(z).second) stack.push_back(z);
      }
      long s = sigma_of[x];
      if (in.insert(s).second) stack.push_back(s);
    }
    return std::vector<long>(in.begin(), in.end());
  };
  for (long x = 0; x < n; ++x) subs.insert(closure({x}));
  for (;;) {
    std::set<std::vector<long>> next = subs;
    for (auto& a : subs)
      for (auto& b : subs) {
        std::vector<long> u;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        next.insert(closure(u));
      }
    if (next.size() == subs.size()) break;
    subs = std::move(next);
  }
  for (auto& h : subs) {
    if (static_cast<long>(h.size()) == n) continue;  // not proper
    for (long x : h)
      if (sigma_of[x] != x) return false;
  }
  return true;
}

inline void partitions_rec(long p, long budget, int maxpart, std::vector<int>& cur,
                           std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  long cost = 1;
  for (int e = 1; e <= maxpart; ++e) {
    if (cost > budget / p) break;  // p^e would exceed the budget
    cost *= p;
    cur.push_back(e);
    partitions_rec(p, budget / cost, e, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

inline std::vector<ExponentLemmaCounterexample> exponent_lemma_search(
    long max_order, const std::vector<long>& primes_q) {
  if (max_order > 256) throw std::invalid_argument("exponent_lemma_search: max_order > 256");
  std::vector<ExponentLemmaCounterexample> out;
  for (long p = 2; p <= max_order; ++p) {
    if (!detail::is_prime(p)) continue;
    if (p * p > max_order) break;  // exponent > p needs order >= p^2
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    detail::partitions_rec(p, max_order, 60, cur, parts);
    for (auto& lam : parts) {
      if (lam[0] < 2) continue;  // exponent p: cannot be a counterexample
      detail::AbelianPGroup k(p, lam);
      const size_t ngen = lam.size();
      // generators a_i = e_i; those of non-maximal order are fixed by sigma;
      // maximal-order ones move by an element of K[p].
      std::vector<size_t> free_gens;
      for (size_t i = 0; i < ngen; ++i)
        if (lam[i] == lam[0]) free_gens.push_back(i);
      // K[p] elements
      std::vector<long> kp;
      for (long x = 0; x < k.size(); ++x)
        if (k.element_order(x) == 1 || k.element_order(x) == p) kp.push_back(x);
      // iterate over candidate tuples (x_i) in K[p]^{|free_gens|}
      std::vector<size_t> pick(free_gens.size(), 0);
      for (;;) {
        std::vector<long> gen_images(ngen);
        for (size_t i = 0; i < ngen; ++i) {
          std::vector<long> e(ngen, 0);
          e[i] = 1;
          gen_images[i] = k.encode(e);
        }
        bool nontrivial = false;
        for (size_t t = 0; t < free_gens.size(); ++t) {
          if (kp[pick[t]] != 0) nontrivial = true;
          gen_images[free_gens[t]] = k.add(gen_images[free_gens[t]], kp[pick[t]]);
        }
        if (nontrivial) {
          // full table; check automorphism of order exactly q, then hypothesis
          const long n = k.size();
          std::vector<long> sigma(n);
          for (long x = 0; x < n; ++x) sigma[x] = detail::apply_endo(k, gen_images, x);
          std::vector<char> hitv(n, 0);
          bool bij = true;
          for (long x = 0; x < n && bij; ++x) {
            if (hitv[sigma[x]]) bij = false;
            hitv[sigma[x]] = 1;
          }
          if (bij) {
            for (long q : primes_q) {
              if (q == p) continue;
              // order divides q and sigma != id  <=>  order exactly q
              std::vector<long> acc(n);
              for (long x = 0; x < n; ++x) acc[x] = x;
              for (long t = 0; t < q; ++t) {
                std::vector<long> nx(n);
                for (long x = 0; x < n; ++x) nx[x] = sigma[acc[x]];
                acc = std::move(nx);
              }
              bool is_q = true;
              for (long x = 0; x < n; ++x)
                if (acc[x] != x) {
                  is_q = false;
                  break;
                }
              if (!is_q) continue;
              if (!detail::hypothesis_holds(k, sigma)) continue;
              ExponentLemmaCounterexample ce;
              ce.p = p;
              ce.q = q;
              ce.partition = lam;
              for (size_t i = 0; i < ngen; ++i) ce.images.push_back(k.decode(gen_images[i]));
              out.push_back(std::move(ce));
            }
          }
        }
        // advance odometer
        size_t t = 0;
        while (t < pick.size() && ++pick[t] == kp.size()) pick[t++] = 0;
        if (t == pick.size()) break;
        if (pick.empty()) break;
      }
      if (free_gens.empty()) continue;
    }
  }
  return out;
}

}  // namespace eqco::groups
