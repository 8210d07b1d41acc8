#include "caustics/local.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "caustics/errors.hpp"
#include "caustics/extension.hpp"
#include "caustics/polyops.hpp"

namespace caustics {
namespace {

// ===========================================================================
// Dense univariate (KPoly) and bivariate (BPoly) polynomials over a working
// coefficient field K: either Q(i) itself or one dynamic-evaluation extension
// of it.  BPoly indexing: b[j][i] = coefficient of x^i y^j.  The zero
// polynomial is the empty vector; constructors keep results trimmed.

template <class K>
using KPoly = std::vector<K>;
template <class K>
using BPoly = std::vector<std::vector<K>>;

template <class K>
K kc(const GaussianRational& c, const K& ctx) {
  return FieldTraits<K>::from_base(c, ctx);
}

long as_long_exact(const mpq_class& x, const char* what) {
  if (x.get_den() != 1 || !x.get_num().fits_slong_p()) throw ArithmeticError(what);
  return x.get_num().get_si();
}

GaussianRational binom(long n, long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return GaussianRational(mpq_class(r));
}

template <class K>
void ktrim(KPoly<K>& p) {
  while (!p.empty() && FieldTraits<K>::is_zero(p.back())) p.pop_back();
}

template <class K>
KPoly<K> kadd(const KPoly<K>& a, const KPoly<K>& b) {
  KPoly<K> r = a.size() >= b.size() ? a : b;
  const KPoly<K>& s = a.size() >= b.size() ? b : a;
  for (std::size_t i = 0; i < s.size(); ++i) r[i] += s[i];
  ktrim(r);
  return r;
}

template <class K>
KPoly<K> kscale(const KPoly<K>& a, const K& c) {
  KPoly<K> r = a;
  for (auto& x : r) x *= c;
  ktrim(r);
  return r;
}

template <class K>
KPoly<K> ksub(const KPoly<K>& a, const KPoly<K>& b) {
  KPoly<K> r = a;
  if (r.size() < b.size()) {
    if (b.empty()) return r;
    r.resize(b.size(), kc(GaussianRational(), b[0]));
  }
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  ktrim(r);
  return r;
}

template <class K>
KPoly<K> kmul(const KPoly<K>& a, const KPoly<K>& b) {
  if (a.empty() || b.empty()) return {};
  KPoly<K> r(a.size() + b.size() - 1, kc(GaussianRational(), a[0]));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  ktrim(r);
  return r;
}

/// Quotient and remainder; the divisor's leading coefficient is inverted,
/// which may force a modulus split upstream.
template <class K>
std::pair<KPoly<K>, KPoly<K>> kdivrem(KPoly<K> f, const KPoly<K>& g) {
  if (g.empty()) throw ArithmeticError("division by the zero polynomial");
  const long dg = static_cast<long>(g.size()) - 1;
  K inv = FieldTraits<K>::inverse(g.back());
  KPoly<K> q;
  if (static_cast<long>(f.size()) - 1 >= dg) {
    q.assign(f.size() - dg, kc(GaussianRational(), inv));
  }
  for (long i = static_cast<long>(f.size()) - 1; i >= dg; --i) {
    K c = f[i] * inv;
    q[i - dg] = c;
    for (long k = 0; k <= dg; ++k) f[i - dg + k] -= c * g[k];
  }
  f.resize(std::min<std::size_t>(f.size(), static_cast<std::size_t>(dg)));
  ktrim(f);
  ktrim(q);
  return {std::move(q), std::move(f)};
}

template <class K>
KPoly<K> kdiv_exact(const KPoly<K>& f, const KPoly<K>& g) {
  auto [q, r] = kdivrem(f, g);
  if (!r.empty()) throw ArithmeticError("expected an exact polynomial division");
  return q;
}

template <class K>
KPoly<K> kmonic(KPoly<K> p) {
  ktrim(p);
  if (p.empty()) return p;
  K inv = FieldTraits<K>::inverse(p.back());
  for (auto& c : p) c *= inv;
  return p;
}

template <class K>
KPoly<K> kgcd(KPoly<K> a, KPoly<K> b) {
  ktrim(a);
  ktrim(b);
  while (!b.empty()) {
    auto r = kdivrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return kmonic(std::move(a));
}

template <class K>
KPoly<K> kderiv(const KPoly<K>& p) {
  KPoly<K> r;
  for (std::size_t i = 1; i < p.size(); ++i) {
    r.push_back(p[i] * kc(GaussianRational(static_cast<long>(i)), p[i]));
  }
  ktrim(r);
  return r;
}

template <class K>
KPoly<K> ksqfree_part(const KPoly<K>& p) {
  KPoly<K> d = kderiv(p);
  if (d.empty()) return kmonic(p);
  KPoly<K> g = kgcd(p, d);
  if (static_cast<long>(g.size()) <= 1) return kmonic(p);
  return kmonic(kdiv_exact(p, g));
}

template <class K>
K keval_upoly(const UPoly& u, const K& x0) {
  K acc = kc(GaussianRational(), x0);
  for (std::size_t i = u.size(); i-- > 0;) acc = acc * x0 + kc(u[i], x0);
  return acc;
}

/// p(x + a) by Horner.
template <class K>
KPoly<K> kshift(const KPoly<K>& p, const K& a) {
  KPoly<K> res;
  for (std::size_t i = p.size(); i-- > 0;) {
    KPoly<K> nxt(res.size() + 1, kc(GaussianRational(), a));
    for (std::size_t j = 0; j < res.size(); ++j) {
      nxt[j + 1] += res[j];
      nxt[j] += res[j] * a;
    }
    nxt[0] += p[i];
    res = std::move(nxt);
  }
  ktrim(res);
  return res;
}

/// x^e for e >= 0.
template <class K>
K kpow(const K& x, long e) {
  K r = kc(GaussianRational(1), x);
  for (long k = 0; k < e; ++k) r *= x;
  return r;
}

// --------------------------------------------------------------------------
// BPoly helpers.

template <class K>
void btrim(BPoly<K>& b) {
  for (auto& row : b) ktrim(row);
  while (!b.empty() && b.back().empty()) b.pop_back();
}

template <class K>
void baccum(BPoly<K>& b, long j, long i, const K& v) {
  if (static_cast<long>(b.size()) <= j) b.resize(j + 1);
  auto& row = b[j];
  if (static_cast<long>(row.size()) <= i) row.resize(i + 1, kc(GaussianRational(), v));
  row[i] += v;
}

template <class K>
BPoly<K> blift_to(const BPoly<GaussianRational>& b, const K& ctx) {
  BPoly<K> r(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) {
    r[j].reserve(b[j].size());
    for (const auto& c : b[j]) r[j].push_back(kc(c, ctx));
  }
  btrim(r);
  return r;
}

template <class K>
BPoly<K> bshift_x(const BPoly<K>& b, const K& a) {
  BPoly<K> r(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) r[j] = kshift(b[j], a);
  btrim(r);
  return r;
}

/// b(x, y + beta) by Horner over the rows.
template <class K>
BPoly<K> bshift_y(const BPoly<K>& b, const K& beta) {
  BPoly<K> res;
  for (std::size_t j = b.size(); j-- > 0;) {
    BPoly<K> nxt(res.size() + 1);
    for (std::size_t r = 0; r < res.size(); ++r) {
      nxt[r + 1] = kadd(nxt[r + 1], res[r]);
      nxt[r] = kadd(nxt[r], kscale(res[r], beta));
    }
    nxt[0] = kadd(nxt[0], b[j]);
    res = std::move(nxt);
  }
  btrim(res);
  return res;
}

/// b(x + lam * y, y): separates intersection points that share an x-value.
template <class K>
BPoly<K> bshear_x(const BPoly<K>& b, const K& lam) {
  BPoly<K> out;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t i = 0; i < b[j].size(); ++i) {
      const K& c = b[j][i];
      K lp = kc(GaussianRational(1), lam);
      for (std::size_t t = 0; t <= i; ++t) {
        baccum(out, static_cast<long>(j + t), static_cast<long>(i - t),
               c * kc(binom(static_cast<long>(i), static_cast<long>(t)), lam) * lp);
        lp *= lam;
      }
    }
  }
  btrim(out);
  return out;
}

/// Least total degree of a nonzero term (the multiplicity at the origin).
template <class K>
long blowest_degree(const BPoly<K>& b) {
  long best = -1;
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t i = 0; i < b[j].size(); ++i) {
      long t = static_cast<long>(i + j);
      if (best >= 0 && t >= best) continue;
      if (!FieldTraits<K>::is_zero(b[j][i])) best = t;
    }
  }
  if (best < 0) throw ArithmeticError("local polynomial vanished identically");
  return best;
}

template <class K>
long btotal_degree(const BPoly<K>& b) {
  long best = 0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (!b[j].empty()) best = std::max(best, static_cast<long>(j + b[j].size() - 1));
  }
  return best;
}

// --------------------------------------------------------------------------
// Coefficient tables of the three standard charts.
//   table_xyz: F(x, y, 1)   rows indexed by the y-exponent
//   table_xz : F(x, 1, y)   rows indexed by the z-exponent (local y)
//   table_yz : F(1, x, y)   rows indexed by the z-exponent (local y)
// In both charts at infinity the line z = 0 pulls back to the local x-axis.

BPoly<GaussianRational> table_xyz(const MPoly& f) {
  BPoly<GaussianRational> b;
  for (const auto& t : f.terms()) baccum(b, t.exp[VY], t.exp[VX], t.coeff);
  btrim(b);
  return b;
}

BPoly<GaussianRational> table_xz(const MPoly& f) {
  BPoly<GaussianRational> b;
  for (const auto& t : f.terms()) baccum(b, t.exp[VZ], t.exp[VX], t.coeff);
  btrim(b);
  return b;
}

BPoly<GaussianRational> table_yz(const MPoly& f) {
  BPoly<GaussianRational> b;
  for (const auto& t : f.terms()) baccum(b, t.exp[VZ], t.exp[VY], t.coeff);
  btrim(b);
  return b;
}

// ===========================================================================
// Newton expansion of the branches at the origin.
//
// Each recursion level picks an edge of the Newton polygon with primitive
// direction data (p, q) and a root of the edge polynomial, then rewrites the
// curve in coordinates following that initial segment.  The data kept per
// branch is the ramification E (order of x along the branch) and the first
// one or two exponents of the y-series, which determine the branch
// multiplicity, its tangent, and the contact order with the tangent.

struct RawBranch {
  long ram;          // E: the branch parameter t has x = (unit) t^E
  mpq_class l1;      // exponent of the leading series term, in x-units
  bool has_l2;       // second exponent recorded (needed when l1 == 1)
  mpq_class l2;
  long count;        // conjugate branches represented
};

struct BranchShape {
  long mult;
  long contact;
  bool tangent_x_axis;
};

BranchShape shape_of(const RawBranch& rb) {
  mpq_class k1q = rb.l1 * mpq_class(rb.ram);
  long k1 = as_long_exact(k1q, "branch exponent bookkeeping is not integral");
  if (rb.l1 == 1) {
    if (!rb.has_l2) throw ArithmeticError("missing second branch exponent");
    mpq_class k2q = rb.l2 * mpq_class(rb.ram);
    long k2 = as_long_exact(k2q, "branch exponent bookkeeping is not integral");
    return {rb.ram, k2, false};
  }
  return {std::min(rb.ram, k1), std::max(rb.ram, k1), rb.l1 > 1};
}

struct PuiseuxBudget {
  long left;
};

struct PuiseuxState {
  mpq_class scale;   // current x = (original x)^scale, up to unit factors
  mpq_class offset;  // accumulated exponent offset of the y-series
  long ram;
  bool l1_set;
  mpq_class l1;
  bool l2_set;
  mpq_class l2;
};

template <class K>
struct RootSplit {
  std::vector<K> roots;
  std::vector<UPoly> leftovers;  // factors whose roots need an extension
};

RootSplit<GaussianRational> solve_roots(const KPoly<GaussianRational>& p) {
  RootSplit<GaussianRational> out;
  const long d = static_cast<long>(p.size()) - 1;
  if (d <= 0) return out;
  if (d == 1) {
    out.roots.push_back(-p[0] / p[1]);
    return out;
  }
  if (d == 2) {
    auto r = rational_quadratic_roots(p[2], p[1], p[0]);
    if (r.size() == 2) {
      out.roots = std::move(r);
      std::sort(out.roots.begin(), out.roots.end(),
                [](const GaussianRational& a, const GaussianRational& b) {
                  return a.str() < b.str();
                });
      return out;
    }
  }
  out.leftovers.push_back(kmonic(p));
  return out;
}

RootSplit<ExtElem> solve_roots(const KPoly<ExtElem>& p) {
  RootSplit<ExtElem> out;
  const long d = static_cast<long>(p.size()) - 1;
  if (d <= 0) return out;
  if (d == 1) {
    out.roots.push_back(-p[0] * FieldTraits<ExtElem>::inverse(p[1]));
    return out;
  }
  if (d == 2) {
    auto r = ext_quadratic_roots(p[2], p[1], p[0]);
    if (r.size() >= 1) {
      out.roots = std::move(r);
      return out;
    }
  }
  throw ExtensionTowerError("branch analysis needs a second extension level");
}

/// Rewrite f after choosing the edge with upper vertex `top`, direction
/// (p, q), edge value n and edge root gamma.  For p == 1 the substitution is
/// y -> x^q (gamma + y'); for p > 1 a unimodular twist keeps the coefficients
/// in the current field: x -> gamma^a x^p, y -> gamma^b x^q (1 + y') with
/// b p - a q = 1.
template <class K>
BPoly<K> edge_transform(const BPoly<K>& f, std::pair<long, long> top, long p, long q,
                        long n, const K& gamma) {
  long a = 0, b = 0;
  if (p > 1) {
    long old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      long quo = old_r / r;
      std::tie(old_r, r) = std::make_pair(r, old_r - quo * r);
      std::tie(old_s, s) = std::make_pair(s, old_s - quo * s);
      std::tie(old_t, t) = std::make_pair(t, old_t - quo * t);
    }
    // old_s * p + old_t * q == old_r == +-1
    long sp = old_s, tq = old_t;
    if (old_r == -1) {
      sp = -sp;
      tq = -tq;
    }
    // sp * p + tq * q == 1  ->  b = sp, a = -tq gives b p - a q = 1.
    b = sp;
    a = -tq;
  }
  const K one = kc(GaussianRational(1), gamma);
  const K ginv = (p > 1) ? FieldTraits<K>::inverse(gamma) : one;
  const K base = (p > 1) ? one : gamma;
  (void)top;
  BPoly<K> out;
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t i = 0; i < f[j].size(); ++i) {
      const K& c = f[j][i];
      long w = p * static_cast<long>(i) + q * static_cast<long>(j) - n;
      if (w < 0) {
        if (FieldTraits<K>::is_zero(c)) continue;
        throw ArithmeticError("support point below the Newton polygon edge");
      }
      K fac = c;
      if (p > 1) {
        long e = a * static_cast<long>(i) + b * static_cast<long>(j);
        fac *= (e >= 0) ? kpow(gamma, e) : kpow(ginv, -e);
      }
      K bp = one;
      for (long t2 = static_cast<long>(j); t2 >= 0; --t2) {
        // coefficient of y'^t2 in (base + y')^j is C(j, t2) base^(j - t2)
        baccum(out, t2, w, fac * kc(binom(static_cast<long>(j), t2), gamma) * bp);
        bp *= base;
      }
    }
  }
  btrim(out);
  return out;
}

template <class K>
void puiseux_rec(const BPoly<K>& f, const PuiseuxState& st, PuiseuxBudget& budget,
                 std::vector<RawBranch>& out);

/// Continue one edge root: direct recursion for a root in the current field.
template <class K>
void puiseux_root(const BPoly<K>& f, std::pair<long, long> top, long p, long q, long n,
                  const K& gamma, const PuiseuxState& ns, PuiseuxBudget& budget,
                  std::vector<RawBranch>& out) {
  BPoly<K> f1 = edge_transform(f, top, p, q, n, gamma);
  puiseux_rec(f1, ns, budget, out);
}

template <class K>
void puiseux_rec(const BPoly<K>& f, const PuiseuxState& st, PuiseuxBudget& budget,
                 std::vector<RawBranch>& out) {
  if (--budget.left < 0) {
    throw TruncationError("local branch expansion exceeded its iteration budget");
  }

  // Row minima of the support: only the least x-order per y-row can lie on
  // the lower-left Newton polygon.
  std::vector<std::pair<long, long>> rows;  // (j, min x-order)
  for (std::size_t j = 0; j < f.size(); ++j) {
    for (std::size_t i = 0; i < f[j].size(); ++i) {
      if (!FieldTraits<K>::is_zero(f[j][i])) {
        rows.emplace_back(static_cast<long>(j), static_cast<long>(i));
        break;
      }
    }
  }
  if (rows.empty()) throw ArithmeticError("local polynomial vanished identically");

  const long j_min = rows.front().first;
  if (j_min > 0) {
    // y' divides the rewritten curve: the series built so far solves it
    // exactly.  At the top level that is a line of the curve (the chart
    // x-axis); in recursion it ends the current branch.
    if (!st.l1_set) throw DegenerateError("curve has a line component through the point");
    if (j_min > 1) throw ArithmeticError("repeated exact branch; curve is not square-free");
    if (st.l1 == 1 && !st.l2_set) {
      throw DegenerateError("curve has a line component through the point");
    }
    out.push_back({st.ram, st.l1, st.l2_set, st.l2, 1});
    BPoly<K> g(f.begin() + 1, f.end());
    btrim(g);
    // Remaining factor: more branches only if it also passes through origin.
    bool through_origin = g.empty() || g[0].empty() || FieldTraits<K>::is_zero(g[0][0]);
    if (!g.empty() && through_origin) puiseux_rec(g, st, budget, out);
    return;
  }

  long j0 = -1;  // least row with a nonzero constant coefficient
  for (const auto& [j, i] : rows) {
    if (i == 0) {
      j0 = j;
      break;
    }
  }
  if (j0 < 0) {
    if (!st.l1_set) throw DegenerateError("curve has a line component through the point");
    throw ArithmeticError("x divides a rewritten local curve");
  }
  if (j0 == 0) throw ArithmeticError("local expansion lost the base point");

  // A unique regular continuation (j0 == 1) cannot ramify further; once the
  // recorded exponents settle the branch data, emit.
  if (st.l1_set && (st.l1 != 1 || st.l2_set) && j0 == 1) {
    out.push_back({st.ram, st.l1, st.l2_set, st.l2, 1});
    return;
  }

  // Lower-left hull from (0, j0) to the x-axis.
  std::pair<long, long> cur{0, j0};  // (i, j)
  while (cur.second > 0) {
    bool have = false;
    std::pair<long, long> best{0, 0};
    mpq_class best_slope;
    for (const auto& [j, i] : rows) {
      if (j >= cur.second) continue;
      mpq_class slope = mpq_class(i - cur.first) / mpq_class(cur.second - j);
      if (!have || slope < best_slope ||
          (slope == best_slope && j < best.second)) {
        have = true;
        best = {i, j};
        best_slope = slope;
      }
    }
    if (!have) throw ArithmeticError("Newton polygon never reached the x-axis");

    const long di = best.first - cur.first;
    const long dj = cur.second - best.second;
    if (di <= 0) throw ArithmeticError("Newton polygon is not convex");
    const long g = std::gcd(di, dj);
    const long p = dj / g, q = di / g;
    const long n = p * cur.first + q * cur.second;

    // Edge polynomial from the bottom vertex upward.
    const K& ctx = f[rows.front().first][rows.front().second];
    KPoly<K> kappa;
    for (long k = 0; k <= g; ++k) {
      long ii = best.first - k * q, jj = best.second + k * p;
      K c = kc(GaussianRational(), ctx);
      if (jj < static_cast<long>(f.size()) && ii >= 0 &&
          ii < static_cast<long>(f[jj].size())) {
        c = f[jj][ii];
      }
      kappa.push_back(c);
    }
    ktrim(kappa);
    if (static_cast<long>(kappa.size()) != g + 1) {
      throw ArithmeticError("edge polynomial lost its leading vertex");
    }

    mpq_class lnew = st.offset + st.scale * mpq_class(q) / mpq_class(p);
    PuiseuxState ns = st;
    ns.scale = st.scale / mpq_class(p);
    ns.offset = lnew;
    ns.ram = st.ram * p;
    if (!st.l1_set) {
      ns.l1_set = true;
      ns.l1 = lnew;
    } else if (st.l1 == 1 && !st.l2_set) {
      ns.l2_set = true;
      ns.l2 = lnew;
    }

    auto rs = solve_roots(ksqfree_part(kappa));
    for (const K& gamma : rs.roots) {
      puiseux_root(f, cur, p, q, n, gamma, ns, budget, out);
    }
    if constexpr (std::is_same_v<K, GaussianRational>) {
      for (const UPoly& m : rs.leftovers) {
        auto pieces = with_modulus_splitting(m, [&](ExtModulusPtr mod) {
          ExtElem gamma = ExtElem::generator(mod);
          BPoly<ExtElem> fe = blift_to(f, gamma);
          std::vector<RawBranch> sub;
          puiseux_root(fe, cur, p, q, n, gamma, ns, budget, sub);
          return sub;
        });
        for (auto& [mf, sub] : pieces) {
          const long dm = upoly_deg(mf);
          for (RawBranch rb : sub) {
            rb.count *= dm;
            out.push_back(rb);
          }
        }
      }
    } else {
      if (!rs.leftovers.empty()) {
        throw ExtensionTowerError("branch analysis needs a second extension level");
      }
    }
    cur = best;
  }
}

template <class K>
std::vector<RawBranch> puiseux_branches(const BPoly<K>& floc) {
  const long dt = btotal_degree(floc);
  PuiseuxBudget budget{4 * (dt + 4) * (dt + 4)};
  PuiseuxState st{mpq_class(1), mpq_class(0), 1, false, mpq_class(), false, mpq_class()};
  std::vector<RawBranch> out;
  puiseux_rec(floc, st, budget, out);
  long total = 0;
  for (const auto& rb : out) total += shape_of(rb).mult * rb.count;
  if (total != blowest_degree(floc)) {
    throw ArithmeticError("local branch multiplicities do not sum to the point multiplicity");
  }
  return out;
}

// ===========================================================================
// Intersection multiplicity at the origin: least x-order of the y-resultant,
// minimized over a few deterministic shears (a shear fixes the origin and
// generically moves every other common point off the line x = 0; each shear
// can only overcount, so the minimum is the multiplicity).

template <class K>
long kord(const KPoly<K>& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!FieldTraits<K>::is_zero(p[i])) return static_cast<long>(i);
  }
  throw ArithmeticError("x-order of the zero polynomial");
}

template <class K>
std::optional<long> ord_x_res_y(BPoly<K> a, BPoly<K> b) {
  btrim(a);
  btrim(b);
  const long m = static_cast<long>(a.size()) - 1;
  const long n = static_cast<long>(b.size()) - 1;
  if (m < 0 || n < 0) return std::nullopt;
  if (m == 0 && n == 0) return std::nullopt;  // callers ensure both vanish at 0
  if (m == 0) return n * kord(a[0]);
  if (n == 0) return m * kord(b[0]);

  const long nn = m + n;
  const KPoly<K> kzero;
  std::vector<std::vector<KPoly<K>>> mat(nn, std::vector<KPoly<K>>(nn, kzero));
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c <= m; ++c) mat[r][r + c] = a[m - c];
  }
  for (long r = 0; r < m; ++r) {
    for (long c = 0; c <= n; ++c) mat[n + r][r + c] = b[n - c];
  }
  KPoly<K> prev;  // empty marks "1" for the first step
  for (long k = 0; k + 1 < nn; ++k) {
    if (mat[k][k].empty()) {
      long swap_row = -1;
      for (long r = k + 1; r < nn; ++r) {
        if (!mat[r][k].empty()) {
          swap_row = r;
          break;
        }
      }
      if (swap_row < 0) return std::nullopt;
      std::swap(mat[k], mat[swap_row]);
    }
    for (long i = k + 1; i < nn; ++i) {
      for (long j = k + 1; j < nn; ++j) {
        KPoly<K> num = ksub(kmul(mat[k][k], mat[i][j]), kmul(mat[i][k], mat[k][j]));
        mat[i][j] = prev.empty() ? std::move(num) : kdiv_exact(num, prev);
      }
      mat[i][k] = kzero;
    }
    prev = mat[k][k];
  }
  if (mat[nn - 1][nn - 1].empty()) return std::nullopt;
  return kord(mat[nn - 1][nn - 1]);
}

template <class K>
long local_imult(const BPoly<K>& a, const BPoly<K>& b) {
  if (a.size() <= 1 && b.size() <= 1) {
    throw DegenerateError("curves share a component through the point");
  }
  static const std::array<std::pair<long, long>, 5> shears{
      {{0, 1}, {1, 1}, {-1, 1}, {2, 1}, {1, 3}}};
  std::optional<long> best;
  const K ctx = [&]() {
    for (const auto& row : a) {
      if (!row.empty()) return row[0];
    }
    throw ArithmeticError("local polynomial vanished identically");
  }();
  for (const auto& [num, den] : shears) {
    K lam = kc(GaussianRational(mpq_class(num) / mpq_class(den)), ctx);
    std::optional<long> o;
    if (num == 0) {
      o = ord_x_res_y(a, b);
    } else {
      o = ord_x_res_y(bshear_x(a, lam), bshear_x(b, lam));
    }
    if (!o) throw DegenerateError("curves share a component through the point");
    best = best ? std::min(*best, *o) : *o;
  }
  return *best;
}

// ===========================================================================
// Localization charts.

std::pair<BPoly<GaussianRational>, bool> localize_rational(const MPoly& f,
                                                           const ProjPoint& p) {
  const auto& h = p.h;
  if (!h[2].is_zero()) {
    GaussianRational a = h[0] / h[2], b = h[1] / h[2];
    return {bshift_y(bshift_x(table_xyz(f), a), b), false};
  }
  if (!h[1].is_zero()) {
    GaussianRational r = h[0] / h[1];
    return {bshift_x(table_xz(f), r), true};
  }
  return {table_yz(f), true};
}

// ===========================================================================
// Singular points: enumeration over Q(i) with extension clusters, and the
// per-point data feeding the excess-flex count.

struct SingRecord {
  long weight;  // conjugate points represented
  long excess;  // sum over branches off z = 0 of max(contact - 2 mult, 0)
  long hess_mult;  // intersection multiplicity with the Hessian curve
};

MPoly hessian(const MPoly& f) {
  MPoly xx = f.derivative(VX).derivative(VX);
  MPoly xy = f.derivative(VX).derivative(VY);
  MPoly xz = f.derivative(VX).derivative(VZ);
  MPoly yy = f.derivative(VY).derivative(VY);
  MPoly yz = f.derivative(VY).derivative(VZ);
  MPoly zz = f.derivative(VZ).derivative(VZ);
  return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
}

template <class K>
SingRecord analyze_singular_point(const BPoly<K>& floc, const BPoly<K>& hloc,
                                  bool chart_at_infinity) {
  auto raws = puiseux_branches(floc);
  long excess = 0;
  for (const auto& rb : raws) {
    BranchShape sh = shape_of(rb);
    if (chart_at_infinity && sh.tangent_x_axis) continue;  // tangent is z = 0
    excess += std::max(sh.contact - 2 * sh.mult, 0L) * rb.count;
  }
  return {1, excess, local_imult(floc, hloc)};
}

/// Singular points above x = alpha in the affine chart z = 1.
template <class K>
std::vector<SingRecord> affine_fiber_records(const std::vector<UPoly>& f_rows,
                                             const std::vector<UPoly>& fx_rows,
                                             const std::vector<UPoly>& fy_rows,
                                             const BPoly<GaussianRational>& f_base,
                                             const BPoly<GaussianRational>& h_base,
                                             const K& alpha) {
  auto fiber = [&](const std::vector<UPoly>& rows) {
    KPoly<K> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(keval_upoly(r, alpha));
    ktrim(v);
    return v;
  };
  KPoly<K> fa = fiber(f_rows), fxa = fiber(fx_rows), fya = fiber(fy_rows);
  KPoly<K> gy = kgcd(kgcd(fa, fxa), fya);
  std::vector<SingRecord> recs;
  if (static_cast<long>(gy.size()) <= 1) return recs;  // spurious eliminant root
  gy = ksqfree_part(gy);
  auto rs = solve_roots(gy);
  for (const K& beta : rs.roots) {
    BPoly<K> floc = bshift_y(bshift_x(blift_to(f_base, alpha), alpha), beta);
    BPoly<K> hloc = bshift_y(bshift_x(blift_to(h_base, alpha), alpha), beta);
    recs.push_back(analyze_singular_point(floc, hloc, false));
  }
  if constexpr (std::is_same_v<K, GaussianRational>) {
    for (const UPoly& m : rs.leftovers) {
      auto pieces = with_modulus_splitting(m, [&](ExtModulusPtr mod) {
        ExtElem beta = ExtElem::generator(mod);
        ExtElem alpha_e = kc(alpha, beta);
        BPoly<ExtElem> floc = bshift_y(bshift_x(blift_to(f_base, beta), alpha_e), beta);
        BPoly<ExtElem> hloc = bshift_y(bshift_x(blift_to(h_base, beta), alpha_e), beta);
        std::vector<SingRecord> sub{analyze_singular_point(floc, hloc, false)};
        return sub;
      });
      for (auto& [mf, sub] : pieces) {
        const long dm = upoly_deg(mf);
        for (SingRecord r : sub) {
          r.weight *= dm;
          recs.push_back(r);
        }
      }
    }
  } else {
    if (!rs.leftovers.empty()) {
      throw ExtensionTowerError("singular fiber needs a second extension level");
    }
  }
  return recs;
}

UPoly upoly_sqfree_part(const UPoly& p) {
  UPoly d = upoly_derivative(p);
  if (upoly_deg(d) < 0) return p;
  UPoly g = upoly_gcd(p, d);
  if (upoly_deg(g) <= 0) return p;
  return upoly_divrem(p, g).first;
}

std::vector<SingRecord> singular_records(const MPoly& f) {
  const MPoly hess = hessian(f);
  std::vector<SingRecord> recs;

  // Affine chart z = 1.
  const MPoly fa = f.evaluated_var(VZ, GaussianRational(1));
  const MPoly fax = fa.derivative(VX);
  const MPoly fay = fa.derivative(VY);
  const MPoly r1 = resultant(fa, fax, VY);
  const MPoly r2 = resultant(fa, fay, VY);
  if (r1.is_zero() || r2.is_zero()) {
    throw DegenerateError("curve has a line component");
  }
  const MPoly s = mpoly_gcd(r1, r2);
  if (!s.is_constant()) {
    UPoly m_all = upoly_from(square_free_part(s), VX);
    auto to_rows = [](const MPoly& g) {
      std::vector<UPoly> rows;
      for (const auto& c : g.coeffs_in(VY)) rows.push_back(upoly_from(c, VX));
      return rows;
    };
    const auto f_rows = to_rows(fa), fx_rows = to_rows(fax), fy_rows = to_rows(fay);
    const auto f_base = table_xyz(f);
    const auto h_base = table_xyz(hess.evaluated_var(VZ, GaussianRational(1)));
    auto pieces = with_modulus_splitting(m_all, [&](ExtModulusPtr mod) {
      if (mod->degree() == 1) {
        GaussianRational alpha = -mod->poly()[0];
        return affine_fiber_records<GaussianRational>(f_rows, fx_rows, fy_rows, f_base,
                                                      h_base, alpha);
      }
      return affine_fiber_records<ExtElem>(f_rows, fx_rows, fy_rows, f_base, h_base,
                                           ExtElem::generator(mod));
    });
    for (auto& [mf, sub] : pieces) {
      const long dm = upoly_deg(mf);
      for (SingRecord r : sub) {
        r.weight *= dm;
        recs.push_back(r);
      }
    }
  }

  // Points on z = 0 of the form [r : 1 : 0].
  auto restrict_inf = [](const MPoly& g) {
    return upoly_from(
        g.evaluated_var(VY, GaussianRational(1)).evaluated_var(VZ, GaussianRational()),
        VX);
  };
  const UPoly bx = restrict_inf(f.derivative(VX));
  const UPoly by = restrict_inf(f.derivative(VY));
  const UPoly bz = restrict_inf(f.derivative(VZ));
  if (upoly_deg(bx) < 0 && upoly_deg(by) < 0 && upoly_deg(bz) < 0) {
    throw DegenerateError("gradient vanishes along the whole line z = 0");
  }
  UPoly ginf = upoly_gcd(upoly_gcd(bx, by), bz);
  if (upoly_deg(ginf) >= 1) {
    UPoly minf = upoly_sqfree_part(ginf);
    const auto inf_base = table_xz(f);
    const auto hess_inf_base = table_xz(hess);
    auto pieces = with_modulus_splitting(minf, [&](ExtModulusPtr mod) {
      std::vector<SingRecord> sub;
      if (mod->degree() == 1) {
        GaussianRational r = -mod->poly()[0];
        sub.push_back(analyze_singular_point(bshift_x(inf_base, r),
                                             bshift_x(hess_inf_base, r), true));
      } else {
        ExtElem r = ExtElem::generator(mod);
        sub.push_back(analyze_singular_point(bshift_x(blift_to(inf_base, r), r),
                                             bshift_x(blift_to(hess_inf_base, r), r),
                                             true));
      }
      return sub;
    });
    for (auto& [mf, sub] : pieces) {
      const long dm = upoly_deg(mf);
      for (SingRecord r : sub) {
        r.weight *= dm;
        recs.push_back(r);
      }
    }
  }

  // The remaining point [1 : 0 : 0].
  const ProjPoint e0(GaussianRational(1), GaussianRational(), GaussianRational());
  auto grad = gradient_at(f, e0);
  if (grad[0].is_zero() && grad[1].is_zero() && grad[2].is_zero()) {
    recs.push_back(analyze_singular_point(table_yz(f), table_yz(hess), true));
  }
  return recs;
}

// ===========================================================================
// Validation shared by the public entry points.

void validate_curve(const MPoly& f, int min_degree) {
  if (f.is_zero() || !f.is_homogeneous_in({VX, VY, VZ})) {
    throw DegenerateError("curve must be homogeneous in x, y, z");
  }
  if (f.degree() < min_degree) {
    throw DegenerateError("curve degree is too small for this computation");
  }
  if (divides(MPoly::variable(VZ), f)) {
    throw DegenerateError("curve contains the line z = 0");
  }
  if (f.degree() >= 2) {
    for (Var v : {VX, VY, VZ}) {
      if (!f.uses_var(v)) {
        throw DegenerateError("curve is a cone of lines (a variable is absent)");
      }
    }
  }
  if (square_free_part(f).degree() != f.degree()) {
    throw DegenerateError("curve polynomial must be square-free");
  }
}

MPoly nth_partial(const MPoly& f, int a, int b, int c) {
  MPoly g = f;
  for (int k = 0; k < a; ++k) g = g.derivative(VX);
  for (int k = 0; k < b; ++k) g = g.derivative(VY);
  for (int k = 0; k < c; ++k) g = g.derivative(VZ);
  return g;
}

}  // namespace

// ===========================================================================
// Public interface.

int multiplicity_at(const MPoly& f, const ProjPoint& p) {
  validate_curve(f, 1);
  if (!on_curve(f, p)) return 0;
  auto grad = gradient_at(f, p);
  if (!(grad[0].is_zero() && grad[1].is_zero() && grad[2].is_zero())) return 1;
  auto [floc, at_inf] = localize_rational(f, p);
  (void)at_inf;
  return static_cast<int>(blowest_degree(floc));
}

std::vector<BranchClass> branches_at(const MPoly& f, const ProjPoint& p) {
  validate_curve(f, 1);
  if (!on_curve(f, p)) throw DegenerateError("point is not on the curve");
  auto grad = gradient_at(f, p);
  if (!(grad[0].is_zero() && grad[1].is_zero() && grad[2].is_zero())) {
    ProjLine t = tangent_line(f, p);
    const auto& c = t.h;
    const std::array<std::array<GaussianRational, 3>, 3> cands = {{
        {c[1], -c[0], GaussianRational()},
        {c[2], GaussianRational(), -c[0]},
        {GaussianRational(), c[2], -c[1]}}};
    std::optional<ProjPoint> q;
    for (const auto& cand : cands) {
      if (cand[0].is_zero() && cand[1].is_zero() && cand[2].is_zero()) continue;
      ProjPoint qq(cand[0], cand[1], cand[2]);
      if (!same_point(qq, p)) {
        q = qq;
        break;
      }
    }
    if (!q) throw ArithmeticError("failed to pick a second point on the tangent");
    MPoly form = restrict_to_line(f, p.h, q->h);
    int contact = multiplicity_at_root(form, GaussianRational(1), GaussianRational());
    return {{1, 1, contact, same_line(t, line_at_infinity())}};
  }
  auto [floc, at_inf] = localize_rational(f, p);
  auto raws = puiseux_branches(floc);
  std::map<std::tuple<long, long, bool>, long> merged;
  for (const auto& rb : raws) {
    BranchShape sh = shape_of(rb);
    merged[{sh.mult, sh.contact, at_inf && sh.tangent_x_axis}] += rb.count;
  }
  std::vector<BranchClass> out;
  for (const auto& [key, cnt] : merged) {
    out.push_back({static_cast<int>(cnt), static_cast<int>(std::get<0>(key)),
                   static_cast<int>(std::get<1>(key)), std::get<2>(key)});
  }
  return out;
}

int tangency_count_at(const MPoly& f, const ProjPoint& p) {
  validate_curve(f, 1);
  if (!on_curve(f, p)) return 0;
  int total = 0;
  for (const auto& b : branches_at(f, p)) {
    if (b.tangent_at_infinity) total += b.count * b.mult;
  }
  return total;
}

std::vector<InfinityPointClass> infinity_profile(const MPoly& f) {
  validate_curve(f, 1);
  const int d = f.degree();
  const MPoly q_poly =
      f.evaluated_var(VY, GaussianRational(1)).evaluated_var(VZ, GaussianRational());
  const UPoly q = upoly_from(q_poly, VX);
  if (upoly_deg(q) < 0) throw ArithmeticError("restriction to z = 0 vanished");
  std::vector<InfinityPointClass> classes;

  auto cascade = [&](const UPoly& factor, int contact) {
    UPoly cur = factor;
    int mu = 1;
    while (upoly_deg(cur) > 0) {
      UPoly next = cur;
      for (int a = 0; a <= mu; ++a) {
        for (int b = 0; a + b <= mu; ++b) {
          const int c = mu - a - b;
          const MPoly pa = nth_partial(f, a, b, c);
          if (pa.is_zero()) continue;
          const UPoly u = upoly_from(
              pa.evaluated_var(VY, GaussianRational(1)).evaluated_var(VZ, GaussianRational()),
              VX);
          next = upoly_gcd(next, u);
        }
      }
      const int drop = upoly_deg(cur) - std::max(upoly_deg(next), 0);
      if (drop > 0) classes.push_back({drop, contact, mu});
      cur = next;
      ++mu;
      if (mu > d + 1) throw ArithmeticError("multiplicity cascade failed to terminate");
    }
  };

  for (const auto& [factor, k] : upoly_squarefree_decomposition(q)) {
    cascade(factor, k);
  }

  const int v_mult = d - upoly_deg(q);
  if (v_mult > 0) {
    // The point [1:0:0].
    int mu = 1;
    for (; mu <= d; ++mu) {
      bool nonzero = false;
      for (int a = 0; a <= mu && !nonzero; ++a) {
        for (int b = 0; a + b <= mu && !nonzero; ++b) {
          const MPoly pa = nth_partial(f, a, b, mu - a - b);
          if (pa.is_zero()) continue;
          nonzero = !pa.eval({GaussianRational(1), GaussianRational(), GaussianRational(),
                              GaussianRational(), GaussianRational(), GaussianRational()})
                         .is_zero();
        }
      }
      if (nonzero) break;
    }
    if (mu > d) throw ArithmeticError("multiplicity search failed at the point [1:0:0]");
    classes.push_back({1, v_mult, mu});
  }

  std::sort(classes.begin(), classes.end(), [](const InfinityPointClass& a,
                                               const InfinityPointClass& b) {
    return std::tie(a.line_contact, a.multiplicity, a.count) <
           std::tie(b.line_contact, b.multiplicity, b.count);
  });
  int mass = 0;
  for (const auto& cls : classes) mass += cls.count * cls.line_contact;
  if (mass != d) throw ArithmeticError("contact with z = 0 does not sum to the degree");
  return classes;
}

int infinity_defect(const MPoly& f) {
  int s = 0;
  for (const auto& cls : infinity_profile(f)) s += cls.count * cls.multiplicity;
  return f.degree() - s;
}

int flex_excess(const MPoly& f) {
  validate_curve(f, 2);
  const long d = f.degree();
  long sing_excess = 0, sing_hess = 0;
  for (const auto& r : singular_records(f)) {
    sing_excess += r.weight * r.excess;
    sing_hess += r.weight * r.hess_mult;
  }
  long smooth_corr = 0;
  for (const auto& cls : infinity_profile(f)) {
    if (cls.multiplicity == 1 && cls.line_contact >= 2) {
      smooth_corr += static_cast<long>(cls.count) * (cls.line_contact - 2);
    }
  }
  const long smooth = 3 * d * (d - 2) - sing_hess - smooth_corr;
  if (smooth < 0) {
    throw ArithmeticError("inflection bookkeeping came out negative; curve is likely reducible");
  }
  return static_cast<int>(sing_excess + smooth);
}

int local_intersection_multiplicity(const MPoly& f, const MPoly& g, const ProjPoint& p) {
  for (const MPoly* h : {&f, &g}) {
    if (h->is_zero() || !h->is_homogeneous_in({VX, VY, VZ})) {
      throw DegenerateError("intersection inputs must be homogeneous in x, y, z");
    }
  }
  if (!on_curve(f, p) || !on_curve(g, p)) return 0;
  auto [floc, fi] = localize_rational(f, p);
  auto [gloc, gi] = localize_rational(g, p);
  (void)fi;
  (void)gi;
  return static_cast<int>(local_imult(floc, gloc));
}

InvariantReport invariant_bundle(const MPoly& f) {
  validate_curve(f, 2);
  const int d = f.degree();
  InvariantReport r{};
  r.degree = d;
  r.flex_excess = flex_excess(f);
  r.infinity_defect = infinity_defect(f);
  r.tangency_first = tangency_count_at(f, cyclic_point_first());
  r.tangency_second = tangency_count_at(f, cyclic_point_second());
  r.mult_first = multiplicity_at(f, cyclic_point_first());
  r.mult_second = multiplicity_at(f, cyclic_point_second());
  r.predicted_degree = 3 * d + r.flex_excess - r.tangency_first - r.tangency_second;
  return r;
}

}  // namespace caustics
