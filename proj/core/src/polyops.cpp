#include "caustics/polyops.hpp"

#include <algorithm>
#include <cstdint>

#include "caustics/errors.hpp"

namespace caustics {

namespace {

const MPoly& zero_poly() {
  static const MPoly z;
  return z;
}

MPoly monic_or_zero(const MPoly& p) {
  if (p.is_zero()) return p;
  return p.monic();
}

/// Leading coefficient of f viewed in `var` (free of `var`).
MPoly leading_coeff_in(const MPoly& f, Var var) {
  auto cs = f.coeffs_in(var);
  return cs.empty() ? MPoly() : cs.back();
}

/// Deterministic small evaluation values for certificates, one stream per
/// (attempt, variable) pair.
GaussianRational probe_value(int attempt, int var_index) {
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  long v = primes[(attempt * 5 + var_index) % 12] + attempt;
  if ((attempt + var_index) % 2 == 1) v = -v;
  return GaussianRational(v);
}

/// Specialize every variable except `var` to the attempt's probe values.
MPoly specialize_except(const MPoly& f, Var var, int attempt) {
  std::array<MPoly, kNumVars> subs;
  for (int v = 0; v < kNumVars; ++v) {
    if (v == static_cast<int>(var))
      subs[v] = MPoly::variable(var);
    else
      subs[v] = MPoly(probe_value(attempt, v));
  }
  return f.substituted(subs);
}

/// True only when gcd(f, g) is certified constant: some specialization keeps
/// the exact degree of f in `var` and yields a trivial univariate gcd.
bool certified_coprime_in(const MPoly& f, const MPoly& g, Var var) {
  const int df = f.degree_in(var);
  const int dg = g.degree_in(var);
  if (df < 0 || dg < 0) return false;
  for (int attempt = 0; attempt < 4; ++attempt) {
    MPoly fs = specialize_except(f, var, attempt);
    MPoly gs = specialize_except(g, var, attempt);
    if (fs.degree_in(var) != df && gs.degree_in(var) != dg) continue;
    if (fs.is_zero() || gs.is_zero()) continue;
    UPoly uf = upoly_from(fs, var);
    UPoly ug = upoly_from(gs, var);
    UPoly h = upoly_gcd(uf, ug);
    if (upoly_deg(h) == 0) return true;
  }
  return false;
}

}  // namespace

MPoly pseudo_remainder(const MPoly& f, const MPoly& g, Var var) {
  if (g.is_zero()) throw ArithmeticError("pseudo-remainder by zero");
  const int dg = g.degree_in(var);
  if (dg <= 0) return MPoly();
  int df = f.degree_in(var);
  if (df < dg) return f;
  const MPoly lc = leading_coeff_in(g, var);
  MPoly r = f;
  int budget = df - dg + 1;
  while (!r.is_zero()) {
    int dr = r.degree_in(var);
    if (dr < dg) break;
    MPoly lr = leading_coeff_in(r, var);
    Exponents shift{};
    shift[static_cast<int>(var)] = static_cast<uint16_t>(dr - dg);
    r = r * lc - lr * MPoly::monomial(GaussianRational(1), shift) * g;
    --budget;
  }
  if (budget > 0 && !r.is_zero()) r = r * lc.pow(static_cast<unsigned>(budget));
  return r;
}

MPoly resultant(const MPoly& f, const MPoly& g, Var var) {
  if (f.is_zero() || g.is_zero()) return MPoly();
  const int m = f.degree_in(var);
  const int n = g.degree_in(var);
  if (m <= 0 && n <= 0)
    throw EliminationError("resultant: neither input involves the elimination variable");
  if (m <= 0) return f.pow(static_cast<unsigned>(n));
  if (n <= 0) return g.pow(static_cast<unsigned>(m));
  if (m < n) {
    MPoly r = resultant(g, f, var);
    if ((m % 2 == 1) && (n % 2 == 1)) r = -r;
    return r;
  }
  const MPoly cf = content_in(f, var);
  const MPoly cg = content_in(g, var);
  MPoly a = divide_exact(f, cf);
  MPoly b = divide_exact(g, cg);
  // Scalar in front: contents enter through every root/leading-coefficient.
  MPoly mult = cf.pow(static_cast<unsigned>(n)) * cg.pow(static_cast<unsigned>(m));
  bool negate = false;
  MPoly gg = MPoly(GaussianRational(1));
  MPoly hh = gg;
  while (true) {
    const int da = a.degree_in(var);
    const int db = b.degree_in(var);
    const int delta = da - db;
    if ((da % 2 == 1) && (db % 2 == 1)) negate = !negate;
    MPoly r = pseudo_remainder(a, b, var);
    if (r.is_zero()) return MPoly();  // common factor of positive degree
    a = b;
    b = divide_exact(r, gg * hh.pow(static_cast<unsigned>(delta)));
    gg = leading_coeff_in(a, var);
    if (delta == 1)
      hh = gg;
    else if (delta > 1)
      hh = divide_exact(gg.pow(static_cast<unsigned>(delta)),
                        hh.pow(static_cast<unsigned>(delta - 1)));
    if (b.degree_in(var) <= 0) {
      if (b.is_zero()) return MPoly();
      const int dA = a.degree_in(var);
      MPoly fin = divide_exact(b.pow(static_cast<unsigned>(dA)),
                               hh.pow(static_cast<unsigned>(dA - 1)));
      MPoly out = mult * fin;
      return negate ? -out : out;
    }
  }
}

MPoly sylvester_resultant(const MPoly& f, const MPoly& g, Var var) {
  if (f.is_zero() || g.is_zero()) return MPoly();
  const int m = f.degree_in(var);
  const int n = g.degree_in(var);
  if (m <= 0 && n <= 0)
    throw EliminationError("resultant: neither input involves the elimination variable");
  if (m <= 0) return f.pow(static_cast<unsigned>(n));
  if (n <= 0) return g.pow(static_cast<unsigned>(m));
  const auto fc = f.coeffs_in(var);
  const auto gc = g.coeffs_in(var);
  const int size = m + n;
  std::vector<std::vector<MPoly>> mat(size, std::vector<MPoly>(size));
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k) mat[row][row + (m - k)] = fc[static_cast<size_t>(k)];
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k) mat[n + row][row + (n - k)] = gc[static_cast<size_t>(k)];
  // Bareiss fraction-free elimination; divisions are exact over the domain.
  bool negate = false;
  MPoly prev = MPoly(GaussianRational(1));
  for (int k = 0; k + 1 < size; ++k) {
    if (mat[k][k].is_zero()) {
      int swap_row = -1;
      for (int i = k + 1; i < size; ++i)
        if (!mat[i][k].is_zero()) {
          swap_row = i;
          break;
        }
      if (swap_row < 0) return MPoly();
      std::swap(mat[k], mat[swap_row]);
      negate = !negate;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j)
        mat[i][j] = divide_exact(mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j], prev);
      mat[i][k] = MPoly();
    }
    prev = mat[k][k];
  }
  MPoly det = mat[size - 1][size - 1];
  return negate ? -det : det;
}

MPoly content_in(const MPoly& f, Var var) {
  if (f.is_zero()) return MPoly();
  MPoly acc;
  for (const MPoly& c : f.coeffs_in(var)) {
    if (c.is_zero()) continue;
    acc = mpoly_gcd(acc, c);
    if (!acc.is_zero() && acc.degree() == 0) break;
  }
  return acc;
}

MPoly primitive_part_in(const MPoly& f, Var var) {
  if (f.is_zero()) return f;
  return divide_exact(f, content_in(f, var));
}

MPoly mpoly_gcd(const MPoly& f, const MPoly& g) {
  if (f.is_zero()) return monic_or_zero(g);
  if (g.is_zero()) return monic_or_zero(f);
  if (f.degree() == 0 || g.degree() == 0) return MPoly(GaussianRational(1));
  // Peel variables present on one side only: they can contribute through the
  // coefficient content alone.
  for (int v = 0; v < kNumVars; ++v) {
    Var var = static_cast<Var>(v);
    const bool in_f = f.uses_var(var);
    const bool in_g = g.uses_var(var);
    if (in_f && !in_g) return mpoly_gcd(content_in(f, var), g);
    if (!in_f && in_g) return mpoly_gcd(f, content_in(g, var));
  }
  // Same variable support; pick the common variable of least degree.
  Var var = VX;
  int best = -1;
  for (int v = 0; v < kNumVars; ++v) {
    Var cand = static_cast<Var>(v);
    if (!f.uses_var(cand)) continue;
    int d = std::min(f.degree_in(cand), g.degree_in(cand));
    if (best < 0 || d < best) {
      best = d;
      var = cand;
    }
  }
  const MPoly cf = content_in(f, var);
  const MPoly cg = content_in(g, var);
  MPoly c = mpoly_gcd(cf, cg);
  MPoly a = divide_exact(f, cf);
  MPoly b = divide_exact(g, cg);
  if (certified_coprime_in(a, b, var)) return c.monic();
  if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
  while (true) {
    MPoly r = pseudo_remainder(a, b, var);
    if (r.is_zero()) return (c * primitive_part_in(b, var)).monic();
    if (r.degree_in(var) <= 0) return c.monic();
    a = b;
    b = primitive_part_in(r, var);
  }
}

MPoly square_free_part(const MPoly& p) {
  if (p.is_zero()) return p;
  if (p.degree() == 0) return MPoly(GaussianRational(1));
  std::vector<Var> vars;
  for (int v = 0; v < kNumVars; ++v)
    if (p.uses_var(static_cast<Var>(v))) vars.push_back(static_cast<Var>(v));
  // Fast path: one certified-coprime derivative makes the whole chain trivial.
  for (Var v : vars) {
    MPoly dp = p.derivative(v);
    if (dp.is_zero()) continue;
    if (certified_coprime_in(p, dp, v)) return p.monic();
    break;
  }
  MPoly g = p;
  for (Var v : vars) g = mpoly_gcd(g, p.derivative(v));
  if (g.degree() == 0) return p.monic();
  return divide_exact(p, g).monic();
}

std::vector<MPoly> coprime_split(const std::vector<MPoly>& polys) {
  std::vector<MPoly> work;
  for (const MPoly& p : polys) {
    if (p.is_zero() || p.degree() == 0) continue;
    work.push_back(square_free_part(p));
  }
  std::vector<MPoly> out;
  while (!work.empty()) {
    MPoly p = work.back();
    work.pop_back();
    if (p.degree() <= 0) continue;
    bool coprime_to_all = true;
    for (size_t j = 0; j < out.size(); ++j) {
      MPoly g = mpoly_gcd(p, out[j]);
      if (g.degree() > 0) {
        MPoly q = out[j];
        out.erase(out.begin() + static_cast<long>(j));
        work.push_back(divide_exact(p, g));
        work.push_back(divide_exact(q, g));
        work.push_back(g);
        coprime_to_all = false;
        break;
      }
    }
    if (coprime_to_all) {
      bool dup = false;
      for (const MPoly& q : out)
        if (q == p) {
          dup = true;
          break;
        }
      if (!dup) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const MPoly& a, const MPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.str() < b.str();
  });
  return out;
}

MPoly restrict_to_line(const MPoly& f, const std::array<GaussianRational, 3>& a,
                       const std::array<GaussianRational, 3>& b) {
  if (f.uses_var(VU) || f.uses_var(VV) || f.uses_var(VW))
    throw DegenerateError("line restriction requires a curve in x, y, z only");
  const GaussianRational c0 = a[1] * b[2] - a[2] * b[1];
  const GaussianRational c1 = a[2] * b[0] - a[0] * b[2];
  const GaussianRational c2 = a[0] * b[1] - a[1] * b[0];
  if (c0.is_zero() && c1.is_zero() && c2.is_zero())
    throw DegenerateError("degenerate line: base points are proportional");
  std::array<MPoly, kNumVars> subs;
  const MPoly u = MPoly::variable(VU);
  const MPoly v = MPoly::variable(VV);
  for (int k = 0; k < 3; ++k) subs[k] = u.scaled(a[static_cast<size_t>(k)]) + v.scaled(b[static_cast<size_t>(k)]);
  subs[VU] = MPoly();
  subs[VV] = MPoly();
  subs[VW] = MPoly();
  MPoly out = f.substituted(subs);
  if (out.is_zero()) throw DegenerateError("curve vanishes identically on the line");
  return out;
}

int multiplicity_at_root(const MPoly& binary_form, const GaussianRational& s0,
                         const GaussianRational& t0) {
  if (s0.is_zero() && t0.is_zero())
    throw ArithmeticError("multiplicity: [0:0] is not a projective root");
  if (binary_form.is_zero()) throw ArithmeticError("multiplicity in the zero form");
  MPoly line = MPoly::variable(VU).scaled(t0) - MPoly::variable(VV).scaled(s0);
  MPoly rest = binary_form;
  int count = 0;
  while (divides(line, rest)) {
    rest = divide_exact(rest, line);
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Dense univariate layer.

void upoly_trim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int upoly_deg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly upoly_from(const MPoly& p, Var var) {
  for (int v = 0; v < kNumVars; ++v)
    if (v != static_cast<int>(var) && p.uses_var(static_cast<Var>(v)))
      throw ArithmeticError("univariate conversion: extra variable present");
  UPoly out;
  auto cs = p.coeffs_in(var);
  out.reserve(cs.size());
  for (const MPoly& c : cs) {
    GaussianRational val;
    if (!c.is_zero()) val = c.leading_coeff();
    out.push_back(val);
  }
  upoly_trim(out);
  return out;
}

MPoly upoly_to(const UPoly& p, Var var) {
  MPoly out;
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k].is_zero()) continue;
    Exponents e{};
    e[static_cast<int>(var)] = static_cast<uint16_t>(k);
    out += MPoly::monomial(p[k], e);
  }
  return out;
}

UPoly upoly_derivative(const UPoly& p) {
  UPoly out;
  for (size_t k = 1; k < p.size(); ++k) out.push_back(p[k] * GaussianRational(static_cast<long>(k)));
  upoly_trim(out);
  return out;
}

std::pair<UPoly, UPoly> upoly_divrem(const UPoly& f, const UPoly& g) {
  if (g.empty()) throw ArithmeticError("univariate division by zero");
  UPoly r = f;
  upoly_trim(r);
  const int dg = upoly_deg(g);
  const GaussianRational inv_lc = g.back().inverse();
  if (upoly_deg(r) < dg) return {UPoly{}, r};
  UPoly q(static_cast<size_t>(upoly_deg(r) - dg + 1));
  while (upoly_deg(r) >= dg) {
    const int dr = upoly_deg(r);
    GaussianRational c = r.back() * inv_lc;
    q[static_cast<size_t>(dr - dg)] = c;
    for (int k = 0; k <= dg; ++k)
      r[static_cast<size_t>(dr - dg + k)] -= c * g[static_cast<size_t>(k)];
    upoly_trim(r);
    if (r.empty()) break;
  }
  upoly_trim(q);
  return {q, r};
}

UPoly upoly_gcd(UPoly f, UPoly g) {
  upoly_trim(f);
  upoly_trim(g);
  while (!g.empty()) {
    UPoly r = upoly_divrem(f, g).second;
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty()) {
    const GaussianRational inv = f.back().inverse();
    for (auto& c : f) c *= inv;
  }
  return f;
}

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly out(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  upoly_trim(out);
  return out;
}

std::vector<std::pair<UPoly, int>> upoly_squarefree_decomposition(const UPoly& p_in) {
  UPoly p = p_in;
  upoly_trim(p);
  if (p.empty()) throw ArithmeticError("square-free decomposition of zero");
  std::vector<std::pair<UPoly, int>> out;
  if (upoly_deg(p) == 0) return out;
  const GaussianRational inv = p.back().inverse();
  for (auto& c : p) c *= inv;
  UPoly dp = upoly_derivative(p);
  UPoly g = upoly_gcd(p, dp);
  if (upoly_deg(g) == 0) {
    out.push_back({p, 1});
    return out;
  }
  UPoly c = upoly_divrem(p, g).first;
  UPoly d = upoly_divrem(dp, g).first;
  // d := d - c'
  {
    UPoly cd = upoly_derivative(c);
    if (d.size() < cd.size()) d.resize(cd.size());
    for (size_t k = 0; k < cd.size(); ++k) d[k] -= cd[k];
    upoly_trim(d);
  }
  int mult = 1;
  while (upoly_deg(c) > 0) {
    UPoly a = upoly_gcd(c, d);
    if (upoly_deg(a) > 0) out.push_back({a, mult});
    UPoly c_next = upoly_divrem(c, a).first;
    UPoly d_next = upoly_divrem(d, a).first;
    UPoly cd = upoly_derivative(c_next);
    if (d_next.size() < cd.size()) d_next.resize(cd.size());
    for (size_t k = 0; k < cd.size(); ++k) d_next[k] -= cd[k];
    upoly_trim(d_next);
    c = std::move(c_next);
    d = std::move(d_next);
    ++mult;
  }
  return out;
}

}  // namespace caustics
