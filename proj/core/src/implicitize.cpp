#include "caustics/implicitize.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "caustics/numeric.hpp"
#include "caustics/polyops.hpp"

namespace caustics {

namespace {

using Matrix3 = std::array<std::array<GaussianRational, 3>, 3>;

void validate_source_curve(const MPoly& f) {
  if (f.is_zero() || f.is_constant())
    throw DegenerateError("curve equation must be nonconstant");
  for (Var v : {VU, VV, VW})
    if (f.uses_var(v))
      throw DegenerateError("curve equation must use only x, y, z");
  if (!f.is_homogeneous_in({VX, VY, VZ}))
    throw DegenerateError("curve equation must be homogeneous in x, y, z");
  if (square_free_part(f).degree() != f.degree())
    throw DegenerateError("curve equation must be square-free");
}

GaussianRational det3(const Matrix3& a) {
  GaussianRational d;
  d = d + a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]);
  d = d - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]);
  d = d + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  return d;
}

/// Invertible integer matrix with entries in [-9, 9].
Matrix3 random_gl3(Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    Matrix3 a;
    for (auto& row : a)
      for (auto& e : row) e = GaussianRational(rng.uniform_int(-9, 9));
    if (!det3(a).is_zero()) return a;
  }
  throw ArithmeticError("failed to draw an invertible coordinate change");
}

GaussianRational random_gaussian_entry(Rng& rng, int half) {
  return GaussianRational(mpq_class(rng.uniform_int(-half, half)),
                          mpq_class(rng.uniform_int(-half, half)));
}

GaussianRational nonzero_gaussian(Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    GaussianRational g = random_gaussian_entry(rng, 4);
    if (!g.is_zero()) return g;
  }
  throw ArithmeticError("failed to draw a nonzero Gaussian integer");
}

/// Invertible matrix with Gaussian-integer entries.  Complex entries break the
/// conjugation symmetry of real charts, so distinct fiber points generically
/// land on distinct x-coordinates.
Matrix3 random_gl3_complex(Rng& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    Matrix3 a;
    for (auto& row : a)
      for (auto& e : row) e = random_gaussian_entry(rng, 4);
    if (!det3(a).is_zero()) return a;
  }
  throw ArithmeticError("failed to draw an invertible coordinate change");
}

/// Shared normal-form engine: caches the reduction modulo f of each monomial
/// in the map components, so successive candidate degrees and divisibility
/// certificates reuse the lower powers.
class Reducer {
public:
  Reducer(const MPoly& f, const RationalMapP2& m) : f_(f) {
    for (int k = 0; k < 3; ++k) comp_[static_cast<size_t>(k)] = nf_mod(m[k], f_);
  }

  bool map_vanishes() const {
    return comp_[0].is_zero() && comp_[1].is_zero() && comp_[2].is_zero();
  }

  /// Normal form modulo f of M0^a M1^b M2^c.
  const MPoly& monomial_image(int a, int b, int c) {
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 40) |
                              (static_cast<std::uint64_t>(b) << 20) |
                              static_cast<std::uint64_t>(c);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    MPoly value;
    if (a == 0 && b == 0 && c == 0)
      value = MPoly::constant(1);
    else if (a > 0)
      value = nf_mod(monomial_image(a - 1, b, c) * comp_[0], f_);
    else if (b > 0)
      value = nf_mod(monomial_image(a, b - 1, c) * comp_[1], f_);
    else
      value = nf_mod(monomial_image(a, b, c - 1) * comp_[2], f_);
    return cache_.emplace(key, std::move(value)).first->second;
  }

  /// Normal form modulo f of g(M) for g in the image variables u, v, w.
  /// Reduction is linear, so the normal form of the sum is the sum of the
  /// cached normal forms; g(M) vanishes on the curve iff the result is zero.
  MPoly compose(const MPoly& g) {
    MPoly acc;
    for (const auto& t : g.terms())
      acc += monomial_image(t.exp[VU], t.exp[VV], t.exp[VW]).scaled(t.coeff);
    return acc;
  }

private:
  MPoly f_;
  std::array<MPoly, 3> comp_;
  std::map<std::uint64_t, MPoly> cache_;
};

/// Exponent triples (a, b, c) with a + b + c = d, in a fixed order.
std::vector<std::array<int, 3>> degree_monomials(int d) {
  std::vector<std::array<int, 3>> out;
  out.reserve(static_cast<size_t>((d + 1) * (d + 2) / 2));
  for (int a = d; a >= 0; --a)
    for (int b = d - a; b >= 0; --b) out.push_back({a, b, d - a - b});
  return out;
}

/// Divide out the rational gcd of the entries; row scaling preserves the
/// kernel and keeps the elimination entries small.
void strip_scalar_content(std::vector<GaussianRational>& row) {
  mpq_class c(0);
  for (const auto& e : row) {
    c = rational_gcd(c, e.re());
    c = rational_gcd(c, e.im());
  }
  if (sgn(c) == 0 || c == 1) return;
  mpq_class inv_q = 1 / c;
  const GaussianRational inv(inv_q, mpq_class(0));
  for (auto& e : row) e = e * inv;
}

struct KernelScan {
  int dimension = 0;
  MPoly equation;  // monic basis vector, filled when dimension == 1
};

/// Dimension (and, when one-dimensional, a basis) of the space of degree-d
/// forms G in (u, v, w) with G(M) = 0 modulo f.  For an irreducible image of
/// degree D the dimension is 0 below D, 1 at D, and at least 3 above D, so
/// the value certifies minimality exactly.
KernelScan kernel_at_degree(Reducer& red, int d) {
  const auto monos = degree_monomials(d);
  const int ncols = static_cast<int>(monos.size());
  std::vector<const MPoly*> cols;
  cols.reserve(static_cast<size_t>(ncols));
  std::map<std::uint64_t, int> row_of;
  for (const auto& e : monos) {
    const MPoly& p = red.monomial_image(e[0], e[1], e[2]);
    cols.push_back(&p);
    for (const auto& t : p.terms()) row_of.try_emplace(pack_exponents(t.exp), 0);
  }
  int next_row = 0;
  for (auto& kv : row_of) kv.second = next_row++;
  const int nrows = next_row;

  std::vector<std::vector<GaussianRational>> mat(
      static_cast<size_t>(nrows), std::vector<GaussianRational>(static_cast<size_t>(ncols)));
  for (int j = 0; j < ncols; ++j)
    for (const auto& t : cols[static_cast<size_t>(j)]->terms())
      mat[static_cast<size_t>(row_of[pack_exponents(t.exp)])][static_cast<size_t>(j)] = t.coeff;
  for (auto& row : mat) strip_scalar_content(row);

  // Gauss-Jordan with minimal-height pivots; pivot rows end with entry 1 in
  // their pivot column and zeros in every other pivot column.
  std::vector<int> pivot_row_of_col(static_cast<size_t>(ncols), -1);
  std::vector<char> used(static_cast<size_t>(nrows), 0);
  int rank = 0;
  for (int j = 0; j < ncols && rank < ncols; ++j) {
    int best = -1;
    mpz_class best_height;
    for (int r = 0; r < nrows; ++r) {
      const auto ur = static_cast<size_t>(r);
      if (used[ur] || mat[ur][static_cast<size_t>(j)].is_zero()) continue;
      mpz_class h = mat[ur][static_cast<size_t>(j)].height();
      if (best < 0 || h < best_height) {
        best = r;
        best_height = h;
      }
    }
    if (best < 0) continue;  // free column
    const auto ub = static_cast<size_t>(best);
    used[ub] = 1;
    pivot_row_of_col[static_cast<size_t>(j)] = best;
    ++rank;
    const GaussianRational inv = mat[ub][static_cast<size_t>(j)].inverse();
    for (auto& e : mat[ub])
      if (!e.is_zero()) e = e * inv;
    for (int r = 0; r < nrows; ++r) {
      const auto ur = static_cast<size_t>(r);
      if (r == best || mat[ur][static_cast<size_t>(j)].is_zero()) continue;
      const GaussianRational factor = mat[ur][static_cast<size_t>(j)];
      for (int jj = 0; jj < ncols; ++jj) {
        const auto ujj = static_cast<size_t>(jj);
        if (mat[ub][ujj].is_zero()) continue;
        mat[ur][ujj] = mat[ur][ujj] - factor * mat[ub][ujj];
      }
      if (!used[ur]) strip_scalar_content(mat[ur]);
    }
  }

  KernelScan out;
  out.dimension = ncols - rank;
  if (out.dimension < 1) return out;

  int free_col = -1;
  for (int j = 0; j < ncols; ++j)
    if (pivot_row_of_col[static_cast<size_t>(j)] < 0) {
      free_col = j;
      break;
    }
  MPoly g;
  for (int j = 0; j < ncols; ++j) {
    GaussianRational cj;
    if (j == free_col)
      cj = GaussianRational(1);
    else if (pivot_row_of_col[static_cast<size_t>(j)] >= 0)
      cj = -mat[static_cast<size_t>(pivot_row_of_col[static_cast<size_t>(j)])]
               [static_cast<size_t>(free_col)];
    else
      continue;  // a later free column: this basis vector leaves it at zero
    if (cj.is_zero()) continue;
    Exponents e{};
    e[VU] = static_cast<std::uint16_t>(monos[static_cast<size_t>(j)][0]);
    e[VV] = static_cast<std::uint16_t>(monos[static_cast<size_t>(j)][1]);
    e[VW] = static_cast<std::uint16_t>(monos[static_cast<size_t>(j)][2]);
    g += MPoly::monomial(cj, e);
  }
  out.equation = g.monic();
  if (out.dimension == 1 && !red.compose(out.equation).is_zero())
    throw EliminationError("internal: kernel vector fails the exact vanishing certificate");
  return out;
}

// --------------------------------------------------------------------------
// Word-size prime arithmetic for the fiber counter.  A prime p = 1 (mod 4)
// admits a square root of -1, so Gaussian rationals with p-free denominators
// reduce into F_p.  Resultant and gcd degrees computed there match the exact
// ones unless the prime divides one of finitely many fixed nonzero integers;
// a random 60-bit prime misses them overwhelmingly, and the majority vote
// across trials absorbs the rest.

/// Internal signal: the drawn prime degenerates this reduction -- redraw.
struct BadPrime {};

std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}
std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
std::uint64_t powm(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e != 0) {
    if (e & 1) r = mulm(r, a, p);
    a = mulm(a, a, p);
    e >>= 1;
  }
  return r;
}
std::uint64_t invm(std::uint64_t a, std::uint64_t p) {
  if (a == 0) throw BadPrime{};
  return powm(a, p - 2, p);
}

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n) {
  constexpr std::uint64_t kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (n < 2) return false;
  for (std::uint64_t q : kBases)
    if (n % q == 0) return n == q;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = powm(a % n, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulm(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

/// F_p together with a chosen square root of -1 (so p = 1 mod 4).
struct SplitPrime {
  std::uint64_t p = 0;
  std::uint64_t root = 0;  // root * root = p - 1 (mod p)

  std::uint64_t reduce_rational(const mpq_class& q) const {
    const std::uint64_t den = mpz_fdiv_ui(q.get_den().get_mpz_t(), p);
    if (den == 0) throw BadPrime{};
    const std::uint64_t num = mpz_fdiv_ui(q.get_num().get_mpz_t(), p);
    return mulm(num, invm(den, p), p);
  }
  std::uint64_t reduce(const GaussianRational& g) const {
    return addm(reduce_rational(g.re()), mulm(root, reduce_rational(g.im()), p), p);
  }
};

SplitPrime random_split_prime(Rng& rng) {
  for (int tries = 0; tries < 4096; ++tries) {
    std::uint64_t p = (rng.next() & ((std::uint64_t{1} << 60) - 1)) | (std::uint64_t{1} << 59);
    p = (p & ~std::uint64_t{3}) | 1;  // p = 1 (mod 4)
    if (!is_prime_u64(p)) continue;
    for (std::uint64_t n = 2; n < 64; ++n) {
      if (powm(n, (p - 1) / 2, p) != p - 1) continue;  // need a nonresidue
      const std::uint64_t r = powm(n, (p - 1) / 4, p);
      if (mulm(r, r, p) == p - 1) return {p, r};
      break;
    }
  }
  throw ArithmeticError("failed to draw a split prime");
}

/// Dense univariate polynomial over F_p; index = power of x.
using FpX = std::vector<std::uint64_t>;

void fpx_trim(FpX& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}
int fpx_deg(const FpX& a) { return static_cast<int>(a.size()) - 1; }

std::uint64_t fpx_eval(const FpX& a, std::uint64_t x, std::uint64_t p) {
  std::uint64_t r = 0;
  for (size_t k = a.size(); k-- > 0;) r = addm(mulm(r, x, p), a[k], p);
  return r;
}

FpX fpx_rem(FpX a, const FpX& b, std::uint64_t p) {
  fpx_trim(a);
  const int db = fpx_deg(b);
  const std::uint64_t lead_inv = invm(b.back(), p);
  while (fpx_deg(a) >= db) {
    const int da = fpx_deg(a);
    const std::uint64_t c = mulm(a.back(), lead_inv, p);
    for (int k = 0; k <= db; ++k) {
      auto& slot = a[static_cast<size_t>(da - db + k)];
      slot = subm(slot, mulm(c, b[static_cast<size_t>(k)], p), p);
    }
    fpx_trim(a);
  }
  return a;
}

FpX fpx_quotient(FpX a, const FpX& b, std::uint64_t p) {
  fpx_trim(a);
  const int db = fpx_deg(b);
  const std::uint64_t lead_inv = invm(b.back(), p);
  if (fpx_deg(a) < db) return {};
  FpX q(static_cast<size_t>(fpx_deg(a) - db) + 1, 0);
  while (fpx_deg(a) >= db) {
    const int da = fpx_deg(a);
    const std::uint64_t c = mulm(a.back(), lead_inv, p);
    q[static_cast<size_t>(da - db)] = c;
    for (int k = 0; k <= db; ++k) {
      auto& slot = a[static_cast<size_t>(da - db + k)];
      slot = subm(slot, mulm(c, b[static_cast<size_t>(k)], p), p);
    }
    fpx_trim(a);
  }
  fpx_trim(q);
  return q;
}

FpX fpx_gcd(FpX a, FpX b, std::uint64_t p) {
  fpx_trim(a);
  fpx_trim(b);
  while (!b.empty()) {
    FpX r = fpx_rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

FpX fpx_derivative(const FpX& a, std::uint64_t p) {
  FpX out;
  for (size_t k = 1; k < a.size(); ++k) out.push_back(mulm(a[k], k % p, p));
  fpx_trim(out);
  return out;
}

/// Newton interpolation through (xs[j], ys[j]) with distinct xs.
FpX fpx_interpolate(const std::vector<std::uint64_t>& xs, const std::vector<std::uint64_t>& ys,
                    std::uint64_t p) {
  const size_t n = xs.size();
  std::vector<std::uint64_t> dd = ys;  // divided differences, in place
  for (size_t lvl = 1; lvl < n; ++lvl)
    for (size_t j = n - 1; j >= lvl; --j) {
      const std::uint64_t num = subm(dd[j], dd[j - 1], p);
      const std::uint64_t den = subm(xs[j], xs[j - lvl], p);
      dd[j] = mulm(num, invm(den, p), p);
    }
  FpX out;
  FpX basis{1};  // prod_{k < lvl} (x - xs[k])
  for (size_t lvl = 0; lvl < n; ++lvl) {
    if (out.size() < basis.size()) out.resize(basis.size(), 0);
    for (size_t k = 0; k < basis.size(); ++k) out[k] = addm(out[k], mulm(dd[lvl], basis[k], p), p);
    basis.insert(basis.begin(), 0);
    for (size_t k = 0; k + 1 < basis.size(); ++k)
      basis[k] = subm(basis[k], mulm(xs[lvl], basis[k + 1], p), p);
  }
  fpx_trim(out);
  return out;
}

/// Resultant over F_p of a and b at their actual degrees.
std::uint64_t fp_resultant(FpX a, FpX b, std::uint64_t p) {
  fpx_trim(a);
  fpx_trim(b);
  if (a.empty() || b.empty()) return 0;
  std::uint64_t res = 1;
  bool neg = false;
  while (true) {
    const int da = fpx_deg(a), db = fpx_deg(b);
    if (db == 0) {
      res = mulm(res, powm(b[0], static_cast<std::uint64_t>(da), p), p);
      break;
    }
    FpX r = fpx_rem(a, b, p);
    const int dr = fpx_deg(r);
    res = mulm(res, powm(b.back(), static_cast<std::uint64_t>(da - (dr < 0 ? 0 : dr)), p), p);
    if ((da & 1) && (db & 1)) neg = !neg;
    a = std::move(b);
    b = std::move(r);
    if (b.empty()) return 0;
  }
  return neg ? (p - res) % p : res;
}

/// y-layered dense bivariate polynomial over F_p.
struct FpBi {
  std::vector<FpX> ycoeff;  // ycoeff[j] multiplies y^j
  int ydeg() const { return static_cast<int>(ycoeff.size()) - 1; }
};

FpBi reduce_bivariate(const MPoly& q, const SplitPrime& fp) {
  FpBi out;
  for (const auto& t : q.terms()) {
    const std::uint64_t c = fp.reduce(t.coeff);
    if (c == 0) continue;
    const size_t j = t.exp[VY], k = t.exp[VX];
    if (out.ycoeff.size() <= j) out.ycoeff.resize(j + 1);
    FpX& row = out.ycoeff[j];
    if (row.size() <= k) row.resize(k + 1, 0);
    row[k] = c;
  }
  for (auto& row : out.ycoeff) fpx_trim(row);
  while (!out.ycoeff.empty() && out.ycoeff.back().empty()) out.ycoeff.pop_back();
  return out;
}

/// Coefficients in y at x = x0.
FpX bi_slice(const FpBi& q, std::uint64_t x0, std::uint64_t p) {
  FpX out;
  out.reserve(q.ycoeff.size());
  for (const FpX& row : q.ycoeff) out.push_back(fpx_eval(row, x0, p));
  fpx_trim(out);
  return out;
}

/// Fiber count modulo one split prime.  `f_aff` and `g_aff` must have
/// constant nonzero leading y-coefficients; `components` holds the nonzero
/// dehomogenized map components.  Counts the distinct x-roots of
/// Res_y(f, g) and subtracts those shared with every component eliminant
/// Res_y(f, m_k) -- the base points of the map, which solve g = 0 without
/// lying over the target line.
int modular_fiber_count(const MPoly& f_aff, const MPoly& g_aff,
                        const std::vector<MPoly>& components, const SplitPrime& fp) {
  const std::uint64_t p = fp.p;
  const FpBi F = reduce_bivariate(f_aff, fp);
  const FpBi G = reduce_bivariate(g_aff, fp);
  if (F.ydeg() != f_aff.degree_in(VY) || G.ydeg() != g_aff.degree_in(VY)) throw BadPrime{};

  const int dxf = f_aff.degree_in(VX), dyf = f_aff.degree_in(VY);
  int npts = dyf * g_aff.degree_in(VX) + g_aff.degree_in(VY) * dxf + 1;
  std::vector<FpBi> comps;
  std::vector<int> formal_ydeg;
  comps.reserve(components.size());
  for (const MPoly& mk : components) {
    FpBi r = reduce_bivariate(mk, fp);
    if (r.ycoeff.empty()) throw BadPrime{};  // a nonzero component vanished
    npts = std::max(npts, dyf * mk.degree_in(VX) + mk.degree_in(VY) * dxf + 1);
    formal_ydeg.push_back(r.ydeg());
    comps.push_back(std::move(r));
  }

  std::vector<std::uint64_t> xs(static_cast<size_t>(npts));
  std::vector<std::uint64_t> rv(static_cast<size_t>(npts));
  std::vector<std::vector<std::uint64_t>> bv(comps.size(),
                                             std::vector<std::uint64_t>(static_cast<size_t>(npts)));
  for (int j = 0; j < npts; ++j) {
    const auto x0 = static_cast<std::uint64_t>(j);
    xs[static_cast<size_t>(j)] = x0;
    // The exact leading y-coefficients are nonzero constants, so these
    // slices keep full y-degree at every x0.
    const FpX fe = bi_slice(F, x0, p);
    const FpX ge = bi_slice(G, x0, p);
    rv[static_cast<size_t>(j)] = fp_resultant(fe, ge, p);
    for (size_t k = 0; k < comps.size(); ++k) {
      FpX me = bi_slice(comps[k], x0, p);
      std::uint64_t val = 0;
      if (formal_ydeg[k] == 0) {
        // y-free component: its eliminant shares the roots of the component
        // itself.
        val = me.empty() ? 0 : me[0];
      } else if (!me.empty()) {
        val = fp_resultant(fe, me, p);
        const int drop = formal_ydeg[k] - fpx_deg(me);
        // A vanished leading row of the Sylvester matrix contributes the
        // (constant) leading coefficient of f per missing degree.
        if (drop > 0) val = mulm(val, powm(fe.back(), static_cast<std::uint64_t>(drop), p), p);
      }
      bv[k][static_cast<size_t>(j)] = val;
    }
  }

  const FpX R = fpx_interpolate(xs, rv, p);
  if (R.empty()) throw BadPrime{};  // f divides g, or the prime is bad
  if (fpx_deg(R) == 0) return 0;
  const FpX sf = fpx_quotient(R, fpx_gcd(R, fpx_derivative(R, p), p), p);
  const int total = fpx_deg(sf);
  if (total <= 0) return 0;

  FpX chain;
  bool have = false;
  for (size_t k = 0; k < comps.size(); ++k) {
    FpX bk = fpx_interpolate(xs, bv[k], p);
    if (bk.empty()) continue;  // the component vanishes on the whole curve
    chain = have ? fpx_gcd(std::move(chain), std::move(bk), p) : std::move(bk);
    have = true;
    if (fpx_deg(chain) <= 0) break;  // base locus misses this chart
  }
  if (!have) throw BadPrime{};  // the map cannot vanish on the whole curve

  int shared = 0;
  if (fpx_deg(chain) > 0) shared = fpx_deg(fpx_gcd(sf, chain, p));
  return total - shared;
}

/// One random-line fiber count; nullopt when the draw was degenerate.
///
/// In a random complex chart the x-coordinates of the curve points sent onto
/// a random line l by the map are the roots of Res_y(f, l(M)); the roots
/// shared with every per-component eliminant Res_y(f, M_k) come from base
/// points.  A generic complex chart gives every relevant point a distinct
/// finite x-coordinate, so the fiber size is a difference of squarefree
/// degrees, evaluated modulo a random split prime.
std::optional<int> fiber_count_once(const MPoly& f, const RationalMapP2& map, Rng& rng) {
  MPoly g = map[0].scaled(nonzero_gaussian(rng)) + map[1].scaled(nonzero_gaussian(rng)) +
            map[2].scaled(nonzero_gaussian(rng));
  if (g.is_zero()) return std::nullopt;

  const Matrix3 chart = random_gl3_complex(rng);
  const GaussianRational one(1);
  const MPoly f_aff = f.linear_change_xyz(chart).evaluated_var(VZ, one);
  const MPoly g_aff = g.linear_change_xyz(chart).evaluated_var(VZ, one);
  if (f_aff.degree_in(VY) < 1 || g_aff.degree_in(VY) < 1) return std::nullopt;
  // Constant leading y-coefficients keep every intersection at finite y.
  if (!f_aff.coeffs_in(VY).back().is_constant()) return std::nullopt;
  if (!g_aff.coeffs_in(VY).back().is_constant()) return std::nullopt;

  const RationalMapP2 m2 = map.precomposed_linear(chart);
  std::vector<MPoly> components;
  for (int k = 0; k < 3; ++k) {
    MPoly mk = m2[k].evaluated_var(VZ, one);
    if (!mk.is_zero()) components.push_back(std::move(mk));
  }
  if (components.empty()) return std::nullopt;

  for (int attempt = 0; attempt < 3; ++attempt) {
    const SplitPrime fp = random_split_prime(rng);
    try {
      return modular_fiber_count(f_aff, g_aff, components, fp);
    } catch (const BadPrime&) {
    }
  }
  return std::nullopt;
}

/// Gcd of the coefficients of the (u, v, w)-monomials: the factor of an inner
/// eliminant that does not involve the image variables at all.
MPoly source_only_content(const MPoly& p) {
  MPoly c = content_in(p, VU);
  c = content_in(c, VV);
  c = content_in(c, VW);
  return c;
}

GaussianRational cofactor(const Matrix3& m, int r, int c) {
  const auto r1 = static_cast<size_t>((r + 1) % 3), r2 = static_cast<size_t>((r + 2) % 3);
  const auto c1 = static_cast<size_t>((c + 1) % 3), c2 = static_cast<size_t>((c + 2) % 3);
  return m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
}

Matrix3 inverse3(const Matrix3& m) {
  const GaussianRational det = det3(m);
  Matrix3 inv;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      inv[static_cast<size_t>(r)][static_cast<size_t>(c)] = cofactor(m, c, r) / det;
  return inv;
}

/// Substitution images sending each of u, v, w to its row of b applied to
/// (u, v, w); x, y, z pass through.
std::array<MPoly, 6> target_frame_images(const Matrix3& b) {
  std::array<MPoly, 6> images{MPoly::variable(VX), MPoly::variable(VY), MPoly::variable(VZ),
                              MPoly(),             MPoly(),             MPoly()};
  for (int r = 0; r < 3; ++r) {
    MPoly row;
    row += MPoly::variable(VU).scaled(b[static_cast<size_t>(r)][0]);
    row += MPoly::variable(VV).scaled(b[static_cast<size_t>(r)][1]);
    row += MPoly::variable(VW).scaled(b[static_cast<size_t>(r)][2]);
    images[static_cast<size_t>(VU) + static_cast<size_t>(r)] = row;
  }
  return images;
}

/// The two-stage resultant elimination in one random frame pair: source
/// coordinates change by a, target coordinates by b.  The eliminant is pulled
/// back to the standard target frame, so the frame-dependent extraneous
/// factors differ from chart to chart while the image equation is shared.
std::optional<MPoly> chart_eliminate(const MPoly& f, const RationalMapP2& map, Rng& rng) {
  const Matrix3 a = random_gl3(rng);
  const Matrix3 b = random_gl3(rng);
  const GaussianRational one(1);
  const MPoly f_aff = f.linear_change_xyz(a).evaluated_var(VZ, one);
  if (f_aff.degree_in(VY) < 1) return std::nullopt;
  const RationalMapP2 m2 = map.linearly_transformed(b).precomposed_linear(a);
  const MPoly u = MPoly::variable(VU);
  const MPoly v = MPoly::variable(VV);
  const MPoly w = MPoly::variable(VW);
  const MPoly g1 = (u * m2[1] - v * m2[0]).evaluated_var(VZ, one);
  const MPoly g2 = (u * m2[2] - w * m2[0]).evaluated_var(VZ, one);
  if (g1.is_zero() || g2.is_zero()) return std::nullopt;

  MPoly r1 = resultant(f_aff, g1, VY);
  MPoly r2 = resultant(f_aff, g2, VY);
  if (r1.is_zero() || r2.is_zero()) return std::nullopt;
  r1 = divide_exact(r1, source_only_content(r1));
  r2 = divide_exact(r2, source_only_content(r2));

  MPoly r;
  if (!r1.uses_var(VX))
    r = r1;
  else if (!r2.uses_var(VX))
    r = r2;
  else
    r = resultant(r1, r2, VX);
  if (r.is_zero() || r.is_constant()) return std::nullopt;
  if (r.uses_var(VX) || r.uses_var(VY) || r.uses_var(VZ)) return std::nullopt;

  const MPoly back = square_free_part(r).substituted(target_frame_images(b)).monic();
  if (!back.is_homogeneous_in({VU, VV, VW})) return std::nullopt;
  return back;
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// < xs.size() through the points (xs[i], ys[i]).
std::vector<GaussianRational> lagrange_coeffs(const std::vector<GaussianRational>& xs,
                                              const std::vector<GaussianRational>& ys) {
  const size_t n = xs.size();
  std::vector<GaussianRational> out(n);
  for (size_t i = 0; i < n; ++i) {
    // Basis numerator prod_{j != i} (t - xs[j]), coefficients low-to-high.
    std::vector<GaussianRational> basis{GaussianRational(1)};
    GaussianRational denom(1);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      denom *= xs[i] - xs[j];
      basis.push_back(GaussianRational(0));
      for (size_t k = basis.size() - 1; k > 0; --k)
        basis[k] = basis[k - 1] - xs[j] * basis[k];
      basis[0] = -xs[j] * basis[0];
    }
    const GaussianRational scale = ys[i] / denom;
    for (size_t k = 0; k < basis.size(); ++k) out[k] += basis[k] * scale;
  }
  return out;
}

/// Gcd of two square-free homogeneous polynomials in (u, v, w), computed by
/// univariate slice gcds and exact interpolation; the generic multivariate
/// gcd is far too slow at the degrees the eliminants reach.  Both inputs move
/// to a shared random frame whose w = 1 slices keep full u-degree, the gcd of
/// each v = c slice is interpolated from the minimal-degree slices, and the
/// verified result is pulled back.  Returns a monic polynomial (constant 1
/// for coprime inputs).
MPoly homogeneous_common_factor(const MPoly& p0, const MPoly& p1, Rng& rng) {
  for (int frame = 0; frame < 4; ++frame) {
    const Matrix3 c = random_gl3(rng);
    const MPoly q0 = p0.substituted(target_frame_images(c));
    const MPoly q1 = p1.substituted(target_frame_images(c));
    Exponents top{};
    top[VU] = static_cast<std::uint16_t>(q0.degree());
    if (q0.coeff(top).is_zero()) continue;
    top[VU] = static_cast<std::uint16_t>(q1.degree());
    if (q1.coeff(top).is_zero()) continue;

    const GaussianRational one(1);
    const MPoly a0 = q0.evaluated_var(VW, one);
    const MPoly a1 = q1.evaluated_var(VW, one);
    const int bound = std::min(q0.degree(), q1.degree());

    // Slice gcds at integer v values; the true slice degree is the minimum
    // (special values only enlarge the gcd, never shrink it).
    std::vector<GaussianRational> points;
    std::vector<UPoly> slices;
    int best_degree = -1;
    long next_value = 0;
    for (int draws = 0; draws < 6 * (bound + 2); ++draws) {
      const GaussianRational cv(next_value);
      next_value = next_value > 0 ? -next_value : -next_value + 1;
      const UPoly s0 = upoly_from(a0.evaluated_var(VV, cv), VU);
      const UPoly s1 = upoly_from(a1.evaluated_var(VV, cv), VU);
      UPoly g = upoly_gcd(s0, s1);
      const int dg = upoly_deg(g);
      if (best_degree < 0 || dg < best_degree) {
        best_degree = dg;
        points.clear();
        slices.clear();
      }
      if (dg == best_degree) {
        points.push_back(cv);
        slices.push_back(std::move(g));
      }
      if (best_degree == 0 || static_cast<int>(points.size()) == best_degree + 1) break;
    }
    if (best_degree == 0) return MPoly(GaussianRational(1));
    if (best_degree < 0 || static_cast<int>(points.size()) < best_degree + 1) continue;

    // Interpolate each u-coefficient across the slices and homogenize.
    MPoly candidate;
    bool consistent = true;
    for (int j = 0; j <= best_degree && consistent; ++j) {
      std::vector<GaussianRational> values;
      values.reserve(points.size());
      for (const UPoly& s : slices)
        values.push_back(j < static_cast<int>(s.size()) ? s[static_cast<size_t>(j)]
                                                        : GaussianRational(0));
      const std::vector<GaussianRational> cs = lagrange_coeffs(points, values);
      for (size_t k = 0; k < cs.size(); ++k) {
        if (cs[k].is_zero()) continue;
        if (j + static_cast<int>(k) > best_degree) {
          consistent = false;  // not a slice family of one homogeneous poly
          break;
        }
        Exponents e{};
        e[VU] = static_cast<std::uint16_t>(j);
        e[VV] = static_cast<std::uint16_t>(k);
        e[VW] = static_cast<std::uint16_t>(best_degree - j - static_cast<int>(k));
        candidate += MPoly::monomial(cs[k], e);
      }
    }
    if (!consistent || candidate.is_zero()) continue;
    if (!divides(candidate, q0) || !divides(candidate, q1)) continue;
    return candidate.substituted(target_frame_images(inverse3(c))).monic();
  }
  throw EliminationError("slice interpolation failed to stabilize a common eliminant factor");
}

}  // namespace

MPoly image_to_source(const MPoly& p) {
  const bool has_source = p.uses_var(VX) || p.uses_var(VY) || p.uses_var(VZ);
  const bool has_image = p.uses_var(VU) || p.uses_var(VV) || p.uses_var(VW);
  if (has_source && has_image)
    throw DegenerateError("polynomial mixes source (x, y, z) and image (u, v, w) variables");
  if (!has_image) return p;
  return p.renamed(VU, VX).renamed(VV, VY).renamed(VW, VZ);
}

int fiber_degree(const MPoly& f, const RationalMapP2& m_in, int trials, std::uint64_t seed) {
  validate_source_curve(f);
  if (trials < 1) throw DegenerateError("fiber counting needs at least one trial");
  const RationalMapP2 map = m_in.content_removed();
  const Rng rng(seed);
  std::map<int, int> tally;
  for (int trial = 0; trial < trials; ++trial) {
    Rng trial_rng = rng.split(static_cast<std::uint64_t>(trial) + 1);
    std::optional<int> count;
    for (int attempt = 0; attempt < 4 && !count; ++attempt)
      count = fiber_count_once(f, map, trial_rng);
    if (count) ++tally[*count];
  }
  for (const auto& [value, votes] : tally)
    if (votes * 2 > trials) return value;
  std::ostringstream os;
  os << "fiber counts did not stabilize over " << trials << " random lines:";
  for (const auto& [value, votes] : tally) os << ' ' << value << " (x" << votes << ")";
  throw NumericError(os.str());
}

ImageCurve image_curve(const MPoly& f, const RationalMapP2& m_in, std::uint64_t seed) {
  validate_source_curve(f);
  const RationalMapP2 map = m_in.content_removed();
  Reducer red(f, map);
  if (red.map_vanishes()) throw DegenerateError("map vanishes identically on the curve");

  const int bezout = std::max(1, f.degree() * map.degree());
  int guess = 1;
  int counted = -1;
  try {
    counted = fiber_degree(f, map, 5, seed);
    guess = std::clamp(counted, 1, bezout);
  } catch (const NumericError&) {
    // The exact scan below starts from degree 1 instead.
  }

  int d = guess;
  KernelScan scan = kernel_at_degree(red, d);
  while (scan.dimension == 0 && d < bezout) scan = kernel_at_degree(red, ++d);
  if (scan.dimension == 0)
    throw EliminationError("no image equation at or below the product-degree bound");
  while (scan.dimension >= 2 && d > 1) {
    KernelScan lower = kernel_at_degree(red, --d);
    if (lower.dimension == 0)
      throw EliminationError(
          "kernel dimension drops from " + std::to_string(scan.dimension) +
          " to zero between adjacent degrees; the input curve is likely reducible");
    scan = lower;
  }
  if (scan.dimension >= 2) throw DegenerateImageError("the image collapses to a single point");

  ImageCurve out;
  out.equation = scan.equation;
  out.degree = out.equation.degree();
  out.certified = (counted == out.degree);
  return out;
}

ImageCurve image_curve_resultant(const MPoly& f, const RationalMapP2& m_in, std::uint64_t seed) {
  validate_source_curve(f);
  const RationalMapP2 map = m_in.content_removed();
  Reducer red(f, map);
  if (red.map_vanishes()) throw DegenerateError("map vanishes identically on the curve");

  Rng rng(seed);
  const auto next_chart = [&]() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::optional<MPoly> p = chart_eliminate(f, map, rng);
      if (p) return *p;
    }
    throw EliminationError("resultant elimination failed in three frames");
  };

  const MPoly p0 = next_chart();
  const MPoly p1 = next_chart();
  MPoly eq = homogeneous_common_factor(p0, p1, rng);
  if (eq.is_constant()) throw EliminationError("the chart eliminants are coprime");
  for (int extra = 0; extra < 2 && !red.compose(eq).is_zero(); ++extra) {
    // Both frames happened to share an extraneous factor; intersect with a
    // fresh frame until only factors vanishing on the image remain.
    eq = homogeneous_common_factor(eq, next_chart(), rng);
    if (eq.is_constant()) throw EliminationError("the chart eliminants are coprime");
  }
  if (!red.compose(eq).is_zero())
    throw EliminationError("the eliminant retains factors that do not vanish on the image");

  ImageCurve out;
  out.equation = eq;
  out.degree = eq.degree();
  for (const MPoly& p : {p0, p1}) {
    const MPoly quotient = divides(eq, p) ? divide_exact(p, eq) : p;
    if (!quotient.is_constant())
      out.stripped_factors.push_back({quotient.monic(), "frame-dependent elimination artifact"});
  }
  try {
    const int counted = fiber_degree(f, map, 3, seed);
    if (counted == 0) throw DegenerateImageError("the image collapses to a single point");
    out.certified = (counted == out.degree);
  } catch (const NumericError&) {
    out.certified = false;
  }
  return out;
}

ImageCurve dual_curve(const MPoly& g, std::uint64_t seed) {
  const MPoly src = image_to_source(g);
  validate_source_curve(src);
  if (src.degree() == 1) throw DegenerateImageError("the dual of a line is a single point");
  return image_curve(src, gradient_map(src), seed);
}

ImageCurve caustic_implicit(const MPoly& f, const ProjPoint& source, std::uint64_t seed) {
  validate_source_curve(f);
  try {
    return image_curve(f, caustic_map(f, source), seed);
  } catch (const DegenerateImageError&) {
    throw;
  } catch (const DegenerateError& e) {
    throw DegenerateImageError(std::string("degenerate caustic: ") + e.what());
  }
}

ImageCurve caustic_dual_implicit(const MPoly& f, const ProjPoint& source, std::uint64_t seed) {
  validate_source_curve(f);
  try {
    return image_curve(f, reflected_line_map(f, source), seed);
  } catch (const DegenerateImageError&) {
    throw;
  } catch (const DegenerateError& e) {
    throw DegenerateImageError(std::string("degenerate reflected-line family: ") + e.what());
  }
}

ImageCurve orthotomic(const MPoly& f, const ProjPoint& source, std::uint64_t seed) {
  validate_source_curve(f);
  if (source.h[2].is_zero())
    throw DegenerateError("the orthotomic needs a source point not at infinity");
  try {
    return image_curve(f, orthotomic_map(f, source), seed);
  } catch (const DegenerateImageError&) {
    throw;
  } catch (const DegenerateError& e) {
    throw DegenerateImageError(std::string("degenerate orthotomic: ") + e.what());
  }
}

ImageCurve evolute(const MPoly& g, std::uint64_t seed) {
  const MPoly src = image_to_source(g);
  validate_source_curve(src);
  try {
    return image_curve(src, normal_envelope_map(src), seed);
  } catch (const DegenerateImageError&) {
    throw;
  } catch (const DegenerateError& e) {
    throw DegenerateImageError(std::string("degenerate evolute: ") + e.what());
  }
}

}  // namespace caustics
