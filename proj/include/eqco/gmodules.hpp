// Integer representations of finite groups: trivial, coinduced, and
// cokernel (Ck) coefficient modules, plus the twisted Z/p row datum.
#pragma once

#include <eqco/exactalg.hpp>
#include <eqco/groups.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace eqco::gmodules {

using exactalg::Int;
using exactalg::IntegerMatrix;
using groups::FiniteGroup;

// A Z-free module with an action of a subgroup H <= G (H = G in the common
// case). The action table holds one integer matrix per element of H;
// multiplicativity rho(x)rho(y) = rho(xy) is verified at construction, which
// subsumes every defining relation of the group.
class GModule {
 public:
  GModule(std::shared_ptr<const FiniteGroup> g, std::vector<int> support, long rank,
          std::map<int, IntegerMatrix> rho)
      : g_(std::move(g)), support_(std::move(support)), rank_(rank), rho_(std::move(rho)) {
    validate();
  }

  static GModule trivial_over(std::shared_ptr<const FiniteGroup> g, std::vector<int> h,
                              long rank) {
    std::map<int, IntegerMatrix> rho;
    for (int x : h) rho[x] = IntegerMatrix::identity(static_cast<int>(rank));
    return GModule(std::move(g), std::move(h), rank, std::move(rho));
  }

  static GModule trivial(std::shared_ptr<const FiniteGroup> g, long rank = 1) {
    std::vector<int> all(g->order());
    for (int i = 0; i < g->order(); ++i) all[i] = i;
    return trivial_over(std::move(g), std::move(all), rank);
  }

  // Builds the full table from matrices on a generating set by closure;
  // support becomes the subgroup those elements generate. Any inconsistency
  // encountered during closure is a violated relation.
  static GModule from_generator_action(std::shared_ptr<const FiniteGroup> g,
                                       const std::vector<std::pair<int, IntegerMatrix>>& gens) {
    if (gens.empty()) throw std::invalid_argument("no generator actions given");
    const long rank = gens[0].second.rows();
    std::map<int, IntegerMatrix> rho;
    rho[g->identity()] = IntegerMatrix::identity(static_cast<int>(rank));
    std::vector<int> frontier{g->identity()};
    while (!frontier.empty()) {
      int x = frontier.back();
      frontier.pop_back();
      for (auto& [s, m] : gens) {
        if (m.rows() != rank || m.cols() != rank)
          throw std::invalid_argument("generator action matrices must share a square shape");
        int y = g->op(x, s);
        IntegerMatrix prod = rho.at(x) * m;
        auto it = rho.find(y);
        if (it == rho.end()) {
          rho.emplace(y, std::move(prod));
          frontier.push_back(y);
        } else if (!(it->second == prod)) {
          throw std::invalid_argument("generator action violates a group relation");
        }
      }
    }
    std::vector<int> support;
    for (auto& [x, m] : rho) support.push_back(x);
    return GModule(std::move(g), std::move(support), rank, std::move(rho));
  }

  const FiniteGroup& group() const { return *g_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const { return g_; }
  long rank() const { return rank_; }
  const std::vector<int>& support() const { return support_; }
  bool over_whole_group() const { return static_cast<long>(support_.size()) == g_->order(); }

  const IntegerMatrix& act(int element) const {
    auto it = rho_.find(element);
    if (it == rho_.end()) throw std::out_of_range("element outside module support");
    return it->second;
  }

  Int character(int element) const {
    const IntegerMatrix& m = act(element);
    Int t = 0;
    for (int i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
  }

  GModule restricted_to(std::vector<int> h) const {
    std::map<int, IntegerMatrix> rho;
    for (int x : h) rho[x] = act(x);
    return GModule(g_, std::move(h), rank_, std::move(rho));
  }

 private:
  void validate() const {
    if (rho_.size() != support_.size())
      throw std::invalid_argument("action table does not match support");
    for (int x : support_) {
      auto it = rho_.find(x);
      if (it == rho_.end()) throw std::invalid_argument("missing action matrix");
      if (it->second.rows() != rank_ || it->second.cols() != rank_)
        throw std::invalid_argument("action matrix shape mismatch");
    }
    if (!(act(g_->identity()) == IntegerMatrix::identity(static_cast<int>(rank_))))
      throw std::invalid_argument("identity must act as the identity matrix");
    for (int x : support_)
      for (int y : support_) {
        int z = g_->op(x, y);
        if (rho_.find(z) == rho_.end())
          throw std::invalid_argument("support is not closed under multiplication");
        if (!(act(x) * act(y) == act(z)))
          throw std::invalid_argument("action table is not multiplicative");
      }
    // invertibility over Z follows: rho(x) * rho(x^-1) = rho(e) = I
  }

  std::shared_ptr<const FiniteGroup> g_;
  std::vector<int> support_;
  long rank_;
  std::map<int, IntegerMatrix> rho_;
};

// Left coset representatives of H in G, minimal element index per coset,
// identity's coset first.
inline std::vector<int> coset_representatives(const FiniteGroup& g, const std::vector<int>& h) {
  std::vector<int> rep_of(g.order(), -1);
  std::vector<int> reps;
  for (int x = 0; x < g.order(); ++x) {
    if (rep_of[x] >= 0) continue;
    // coset xH; x is the minimal element not yet covered, so it represents
    for (int y : h) {
      int z = g.op(x, y);
      if (rep_of[z] >= 0 && rep_of[z] != x)
        throw std::invalid_argument("not a subgroup: cosets overlap");
      rep_of[z] = x;
    }
    reps.push_back(x);
  }
  return reps;
}

// Coind_H^G(M) realized as Ind_H^G(M) = sum over coset reps g_i of g_i (x) M.
// g * (g_i (x) m) = g_j (x) rho_M(h) m where g g_i = g_j h.
inline GModule coinduced_module(std::shared_ptr<const FiniteGroup> g, const std::vector<int>& h,
                                const GModule& m) {
  if (&m.group() != g.get())
    throw std::invalid_argument("module must live over (a subgroup of) the same group");
  for (int x : h) m.act(x);  // throws if M is not an H-module
  std::vector<int> reps = coset_representatives(*g, h);
  const long k = static_cast<long>(reps.size());
  const long r = m.rank();
  std::vector<int> coset_of(g->order());
  std::map<int, int> rep_index;
  for (long i = 0; i < k; ++i) rep_index[reps[i]] = static_cast<int>(i);
  {
    std::vector<int> rep_of(g->order(), -1);
    for (int i = 0; i < static_cast<int>(k); ++i)
      for (int y : h) rep_of[g->op(reps[i], y)] = reps[i];
    for (int x = 0; x < g->order(); ++x) coset_of[x] = rep_index.at(rep_of[x]);
  }
  // h-part of x relative to its coset: h = rep^{-1} x
  auto h_part = [&](int x) { return g->op(g->inv(reps[coset_of[x]]), x); };

  std::map<int, IntegerMatrix> rho;
  for (int x = 0; x < g->order(); ++x) {
    IntegerMatrix big(static_cast<int>(k * r), static_cast<int>(k * r));
    for (long i = 0; i < k; ++i) {
      int gi = reps[i];
      int prod = g->op(x, gi);
      long j = coset_of[prod];
      const IntegerMatrix& block = m.act(h_part(prod));
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) big.at(static_cast<int>(j * r + a), static_cast<int>(i * r + b)) = block.at(a, b);
    }
    rho[x] = std::move(big);
  }
  std::vector<int> all(g->order());
  for (int i = 0; i < g->order(); ++i) all[i] = i;
  return GModule(std::move(g), std::move(all), k * r, std::move(rho));
}

// Inverse of a unimodular integer matrix via its Smith decomposition
// (U A V = I implies A^{-1} = V U).
inline IntegerMatrix unimodular_inverse(const IntegerMatrix& a) {
  exactalg::SmithDecomposition s = exactalg::smith_normal_form(a);
  if (!(s.d == IntegerMatrix::identity(a.rows())))
    throw std::invalid_argument("matrix is not unimodular");
  return s.v * s.u;
}

// Ck(M) = coker(M -> Coind_H^G(res M)) along the diagonal (unit of the
// adjunction): m |-> sum_i g_i (x) rho_M(g_i^{-1}) m. The diagonal is split
// (the identity-coset block is the identity), so the cokernel is Z-free of
// rank ([G:H]-1) rank(M); its basis is fixed by the Smith transform of the
// diagonal, giving reproducible action matrices.
inline GModule ck_module(std::shared_ptr<const FiniteGroup> g, const std::vector<int>& h,
                         const GModule& m) {
  if (!m.over_whole_group())
    throw std::invalid_argument("ck_module requires a module over the whole group");
  GModule x = coinduced_module(g, h, m.restricted_to(h));
  std::vector<int> reps = coset_representatives(*g, h);
  const long k = static_cast<long>(reps.size());
  const long r = m.rank();
  // diagonal matrix D: (k r) x r, block i = rho_M(g_i^{-1})
  IntegerMatrix d(static_cast<int>(k * r), static_cast<int>(r));
  for (long i = 0; i < k; ++i) {
    const IntegerMatrix& block = m.act(g->inv(reps[i]));
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) d.at(static_cast<int>(i * r + a), b) = block.at(a, b);
  }
  // equivariance sanity: rho_X(g) D = D rho_M(g)
  for (auto& [name, gen] : g->generators())
    if (!(x.act(gen) * d == d * m.act(gen)))
      throw std::logic_error("diagonal map is not equivariant");
  exactalg::SmithDecomposition s = exactalg::smith_normal_form(d);
  for (int t = 0; t < static_cast<int>(r); ++t)
    if (s.d.at(t, t) != 1) throw std::logic_error("diagonal map is not split");
  // quotient coordinates: last (k-1)r rows of U; section: last cols of U^{-1}
  IntegerMatrix uinv = unimodular_inverse(s.u);
  const long qr = (k - 1) * r;
  IntegerMatrix proj(static_cast<int>(qr), static_cast<int>(k * r));
  IntegerMatrix sect(static_cast<int>(k * r), static_cast<int>(qr));
  for (long i = 0; i < qr; ++i)
    for (long j = 0; j < k * r; ++j) {
      proj.at(static_cast<int>(i), static_cast<int>(j)) = s.u.at(static_cast<int>(r + i), static_cast<int>(j));
      sect.at(static_cast<int>(j), static_cast<int>(i)) = uinv.at(static_cast<int>(j), static_cast<int>(r + i));
    }
  std::map<int, IntegerMatrix> rho;
  for (int e = 0; e < g->order(); ++e) rho[e] = proj * x.act(e) * sect;
  std::vector<int> all(g->order());
  for (int i = 0; i < g->order(); ++i) all[i] = i;
  return GModule(std::move(g), std::move(all), qr, std::move(rho));
}

// Coefficient datum for row 2j of the LHS E2 page of Z_p x| Z_{q^n}:
// the group Z/p with the quotient generator acting by multiplication by
// k^j mod p. Not a GModule (Z/p is not Z-free); torsion rows are handled
// as closed-form groups downstream.
struct TwistedPowerDatum {
  long p = 0;
  long multiplier = 1;  // k^j mod p

  bool trivial_action() const { return multiplier % p == 1 % p; }
};

inline TwistedPowerDatum twisted_power_module(long p, long k, long j) {
  if (!groups::detail::is_prime(p)) throw std::invalid_argument("p must be prime");
  if (k % p == 0) throw std::invalid_argument("k must be a unit mod p");
  TwistedPowerDatum t;
  t.p = p;
  t.multiplier = groups::detail::pow_mod(k, j, p);
  return t;
}

}  // namespace eqco::gmodules
