#include "caustics/extension.hpp"

#include <gmpxx.h>

#include "caustics/errors.hpp"

namespace caustics {

namespace {

/// Square root of a nonnegative rational, when it is a perfect square.
std::optional<mpq_class> mpq_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  const mpz_class num = q.get_num();
  const mpz_class den = q.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  mpq_class r(sn, sd);
  r.canonicalize();
  return r;
}

}  // namespace

ExtModulus::ExtModulus(UPoly m) : m_(std::move(m)) {
  upoly_trim(m_);
  if (upoly_deg(m_) < 1)
    throw ArithmeticError("extension modulus must have positive degree");
  const GaussianRational lc = m_.back();
  if (!lc.is_one()) {
    const GaussianRational inv = lc.inverse();
    for (auto& c : m_) c *= inv;
  }
  UPoly g = upoly_gcd(m_, upoly_derivative(m_));
  if (upoly_deg(g) > 0) throw ArithmeticError("extension modulus must be square-free");
}

ExtElem::ExtElem(ExtModulusPtr mod, UPoly rep) : mod_(std::move(mod)), rep_(std::move(rep)) {
  if (!mod_) throw ArithmeticError("extension element needs a modulus");
  reduce();
}

ExtElem ExtElem::from_base(ExtModulusPtr mod, const GaussianRational& c) {
  UPoly rep;
  if (!c.is_zero()) rep.push_back(c);
  return ExtElem(std::move(mod), std::move(rep));
}

ExtElem ExtElem::generator(ExtModulusPtr mod) {
  return ExtElem(std::move(mod), UPoly{GaussianRational(0), GaussianRational(1)});
}

void ExtElem::reduce() {
  upoly_trim(rep_);
  if (mod_ && upoly_deg(rep_) >= mod_->degree()) rep_ = upoly_divrem(rep_, mod_->poly()).second;
}

bool ExtElem::is_zero() const {
  if (rep_.empty()) return true;
  if (!mod_ || static_cast<int>(rep_.size()) == 1) return false;
  UPoly g = upoly_gcd(rep_, mod_->poly());
  if (upoly_deg(g) == 0) return false;
  throw SplitRequired{std::move(g)};
}

GaussianRational ExtElem::as_base() const {
  if (rep_.empty()) return GaussianRational(0);
  if (rep_.size() == 1) return rep_[0];
  throw ArithmeticError("extension element is not a base constant");
}

ExtElem ExtElem::operator-() const {
  ExtElem r = *this;
  for (auto& c : r.rep_) c = -c;
  return r;
}

namespace {
void align_moduli(ExtModulusPtr& a, const ExtModulusPtr& b) {
  if (!a) {
    a = b;
    return;
  }
  if (!b || a == b) return;
  if (a->poly().size() == b->poly().size()) {
    bool same = true;
    for (size_t k = 0; k < a->poly().size(); ++k)
      if (!(a->poly()[k] == b->poly()[k])) {
        same = false;
        break;
      }
    if (same) return;
  }
  throw ArithmeticError("mixed extension moduli");
}
}  // namespace

ExtElem& ExtElem::operator+=(const ExtElem& o) {
  align_moduli(mod_, o.mod_);
  if (rep_.size() < o.rep_.size()) rep_.resize(o.rep_.size());
  for (size_t k = 0; k < o.rep_.size(); ++k) rep_[k] += o.rep_[k];
  reduce();
  return *this;
}

ExtElem& ExtElem::operator-=(const ExtElem& o) {
  align_moduli(mod_, o.mod_);
  if (rep_.size() < o.rep_.size()) rep_.resize(o.rep_.size());
  for (size_t k = 0; k < o.rep_.size(); ++k) rep_[k] -= o.rep_[k];
  reduce();
  return *this;
}

ExtElem& ExtElem::operator*=(const ExtElem& o) {
  align_moduli(mod_, o.mod_);
  rep_ = upoly_mul(rep_, o.rep_);
  reduce();
  return *this;
}

ExtElem& ExtElem::operator/=(const ExtElem& o) { return *this *= o.inverse(); }

ExtElem ExtElem::inverse() const {
  if (rep_.empty()) throw ArithmeticError("inverse of zero in extension ring");
  if (!mod_) throw ArithmeticError("extension element needs a modulus");
  if (rep_.size() == 1) return from_base(mod_, rep_[0].inverse());
  // Extended Euclid: maintain r_k = s_k * rep (mod m).
  UPoly r0 = mod_->poly(), r1 = rep_;
  UPoly s0, s1{GaussianRational(1)};
  while (!r1.empty()) {
    auto [q, r] = upoly_divrem(r0, r1);
    UPoly s2 = s0;
    UPoly qs = upoly_mul(q, s1);
    if (s2.size() < qs.size()) s2.resize(qs.size());
    for (size_t k = 0; k < qs.size(); ++k) s2[k] -= qs[k];
    upoly_trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (upoly_deg(r0) > 0) {
    const GaussianRational inv = r0.back().inverse();
    for (auto& c : r0) c *= inv;
    throw SplitRequired{std::move(r0)};
  }
  const GaussianRational inv = r0[0].inverse();
  for (auto& c : s0) c *= inv;
  return ExtElem(mod_, std::move(s0));
}

std::string ExtElem::str() const {
  if (rep_.empty()) return "0";
  std::string out;
  for (size_t k = rep_.size(); k-- > 0;) {
    const GaussianRational& c = rep_[k];
    if (c.is_zero()) continue;
    std::string cs = c.str();
    const bool mixed = cs.find('+') != std::string::npos ||
                       cs.rfind('-') != std::string::npos && cs.rfind('-') > 0;
    std::string term;
    if (k == 0) {
      term = mixed ? "(" + cs + ")" : cs;
    } else {
      std::string power = (k == 1) ? "t" : "t^" + std::to_string(k);
      if (cs == "1")
        term = power;
      else if (cs == "-1")
        term = "-" + power;
      else
        term = (mixed ? "(" + cs + ")" : cs) + "*" + power;
    }
    if (out.empty()) {
      out = term;
    } else if (!term.empty() && term[0] == '-') {
      out += " - " + term.substr(1);
    } else {
      out += " + " + term;
    }
  }
  return out;
}

std::optional<GaussianRational> rational_sqrt(const GaussianRational& x) {
  if (x.is_zero()) return GaussianRational(0);
  const mpq_class a = x.re();
  const mpq_class b = x.im();
  if (b == 0) {
    if (a > 0) {
      auto r = mpq_sqrt(a);
      if (r) return GaussianRational(*r);
      return std::nullopt;
    }
    auto r = mpq_sqrt(mpq_class(-a));
    if (r) return GaussianRational(mpq_class(0), *r);
    return std::nullopt;
  }
  // (u + v i)^2 = x forces u^2 = (re + |x|)/2 and v = im/(2u).
  auto s = mpq_sqrt(mpq_class(a * a + b * b));
  if (!s) return std::nullopt;
  auto u = mpq_sqrt(mpq_class((a + *s) / 2));
  if (!u || *u == 0) return std::nullopt;
  mpq_class v = b / (2 * *u);
  GaussianRational cand{*u, v};
  if (cand * cand == x) return cand;
  return std::nullopt;
}

std::vector<GaussianRational> rational_quadratic_roots(const GaussianRational& a,
                                                       const GaussianRational& b,
                                                       const GaussianRational& c) {
  if (a.is_zero()) {
    if (b.is_zero()) return {};
    return {-c / b};
  }
  const GaussianRational disc = b * b - GaussianRational(4) * a * c;
  auto s = rational_sqrt(disc);
  if (!s) return {};
  const GaussianRational half = (GaussianRational(2) * a).inverse();
  if (s->is_zero()) return {-b * half};
  return {(-b + *s) * half, (-b - *s) * half};
}

std::optional<ExtElem> ext_sqrt(const ExtElem& x) {
  const ExtModulusPtr& mod = x.modulus();
  if (!mod) throw ArithmeticError("extension element needs a modulus");
  if (x.rep().empty()) return ExtElem::from_base(mod, GaussianRational(0));
  if (mod->degree() == 1) {
    auto r = rational_sqrt(x.as_base());
    if (!r) return std::nullopt;
    return ExtElem::from_base(mod, *r);
  }
  if (mod->degree() != 2)
    throw ExtensionTowerError("square roots beyond one quadratic extension are unsupported");
  // m = t^2 + p t + q; seek (u + v t)^2 = A + B t.
  const GaussianRational q = mod->poly()[0];
  const GaussianRational p = mod->poly()[1];
  const GaussianRational A = x.rep().empty() ? GaussianRational(0) : x.rep()[0];
  const GaussianRational B = x.rep().size() > 1 ? x.rep()[1] : GaussianRational(0);
  if (B.is_zero()) {
    auto r = rational_sqrt(A);
    if (r) return ExtElem::from_base(mod, *r);
  }
  // With w = v^2: (p^2 - 4q) w^2 + (2Bp - 4A) w + B^2 = 0.
  const GaussianRational D = p * p - GaussianRational(4) * q;
  for (const GaussianRational& w :
       rational_quadratic_roots(D, GaussianRational(2) * B * p - GaussianRational(4) * A,
                                B * B)) {
    auto v = rational_sqrt(w);
    if (!v || v->is_zero()) continue;
    const GaussianRational u = (B + p * w) / (GaussianRational(2) * *v);
    ExtElem cand(mod, UPoly{u, *v});
    if ((cand * cand - x).is_zero()) return cand;
  }
  return std::nullopt;
}

std::vector<ExtElem> ext_quadratic_roots(const ExtElem& a, const ExtElem& b,
                                         const ExtElem& c) {
  if (a.is_zero()) {
    if (b.is_zero()) return {};
    return {-c / b};
  }
  const ExtElem four = FieldTraits<ExtElem>::from_base(GaussianRational(4), a);
  const ExtElem two = FieldTraits<ExtElem>::from_base(GaussianRational(2), a);
  ExtElem disc = b * b - four * a * c;
  auto s = ext_sqrt(disc);
  if (!s) return {};
  const ExtElem denom_inv = (two * a).inverse();
  if (s->is_zero()) return {-b * denom_inv};
  return {(-b + *s) * denom_inv, (-b - *s) * denom_inv};
}

}  // namespace caustics
