#include "caustics/mpoly.hpp"

#include <algorithm>
#include <unordered_map>

#include "caustics/errors.hpp"

namespace caustics {

const char* const kVarNames[kNumVars] = {"x", "y", "z", "u", "v", "w"};

MPoly::MPoly(const GaussianRational& c) {
  if (!c.is_zero()) terms_.push_back({Exponents{}, c});
}

MPoly MPoly::monomial(const GaussianRational& c, const Exponents& e) {
  MPoly p;
  if (!c.is_zero()) p.terms_.push_back({e, c});
  return p;
}

MPoly MPoly::variable(Var v) {
  Exponents e{};
  e[v] = 1;
  return monomial(GaussianRational(1), e);
}

int MPoly::degree_in(Var v) const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, int(t.exp[v]));
  return d;
}

const MPoly::Term& MPoly::leading_term() const {
  if (terms_.empty()) throw ArithmeticError("leading term of zero polynomial");
  return terms_.front();
}

GaussianRational MPoly::coeff(const Exponents& e) const {
  for (const Term& t : terms_) {
    if (t.exp == e) return t.coeff;
  }
  return GaussianRational(0);
}

bool MPoly::is_homogeneous_in(std::initializer_list<Var> vars) const {
  if (terms_.empty()) return true;
  int deg = -1;
  for (const Term& t : terms_) {
    int d = 0, other = 0;
    for (int k = 0; k < kNumVars; ++k) {
      bool in = false;
      for (Var v : vars) in = in || (v == k);
      (in ? d : other) += t.exp[k];
    }
    if (other != 0) return false;
    if (deg < 0) deg = d;
    if (d != deg) return false;
  }
  return true;
}

void MPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return grlex_greater(a.exp, b.exp); });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (Term& t : terms_) {
    if (!out.empty() && out.back().exp == t.exp) {
      out.back().coeff += t.coeff;
      if (out.back().coeff.is_zero()) out.pop_back();
    } else if (!t.coeff.is_zero()) {
      out.push_back(std::move(t));
    }
  }
  terms_ = std::move(out);
}

MPoly MPoly::from_terms(std::vector<Term> terms) {
  MPoly p;
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

MPoly MPoly::operator-() const {
  MPoly r = *this;
  for (Term& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

// Merge of two sorted term lists.
MPoly& MPoly::operator+=(const MPoly& o) {
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && grlex_greater(terms_[i].exp, o.terms_[j].exp))) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || grlex_greater(o.terms_[j].exp, terms_[i].exp)) {
      out.push_back(o.terms_[j++]);
    } else {
      GaussianRational c = terms_[i].coeff + o.terms_[j].coeff;
      if (!c.is_zero()) out.push_back({terms_[i].exp, std::move(c)});
      ++i, ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.is_zero() || b.is_zero()) return MPoly();
  std::unordered_map<std::uint64_t, MPoly::Term> acc;
  acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 4);
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      Exponents e;
      for (int k = 0; k < kNumVars; ++k) e[k] = std::uint16_t(ta.exp[k] + tb.exp[k]);
      auto key = pack_exponents(e);
      auto it = acc.find(key);
      if (it == acc.end()) {
        acc.emplace(key, MPoly::Term{e, ta.coeff * tb.coeff});
      } else {
        it->second.coeff += ta.coeff * tb.coeff;
      }
    }
  }
  std::vector<MPoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [k, t] : acc) terms.push_back(std::move(t));
  return MPoly::from_terms(std::move(terms));
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].exp != b.terms_[k].exp || a.terms_[k].coeff != b.terms_[k].coeff) return false;
  }
  return true;
}

MPoly MPoly::scaled(const GaussianRational& c) const {
  if (c.is_zero()) return MPoly();
  MPoly r = *this;
  for (Term& t : r.terms_) t.coeff *= c;
  return r;
}

MPoly MPoly::pow(unsigned n) const {
  MPoly r = constant(1);
  MPoly base = *this;
  while (n) {
    if (n & 1) r *= base;
    n >>= 1;
    if (n) base *= base;
  }
  return r;
}

MPoly MPoly::derivative(Var v) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.exp[v] == 0) continue;
    Term d = t;
    d.coeff *= GaussianRational(long(t.exp[v]));
    d.exp[v] -= 1;
    out.push_back(std::move(d));
  }
  return from_terms(std::move(out));
}

MPoly MPoly::conjugated() const {
  MPoly r = *this;
  for (Term& t : r.terms_) t.coeff = t.coeff.conj();
  return r;
}

std::vector<MPoly> MPoly::coeffs_in(Var v) const {
  if (terms_.empty()) return {};
  std::vector<MPoly> out(std::size_t(degree_in(v)) + 1);
  std::vector<std::vector<Term>> buckets(out.size());
  for (const Term& t : terms_) {
    Term s = t;
    std::size_t k = t.exp[v];
    s.exp[v] = 0;
    buckets[k].push_back(std::move(s));
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = from_terms(std::move(buckets[k]));
  return out;
}

MPoly MPoly::from_coeffs(const std::vector<MPoly>& cs, Var v) {
  MPoly r;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    MPoly vk = MPoly::variable(v).pow(unsigned(k));
    r += cs[k] * vk;
  }
  return r;
}

MPoly MPoly::substituted(const std::array<MPoly, 6>& images) const {
  // Power cache per variable, filled on demand.
  std::array<std::vector<MPoly>, 6> powers;
  for (int v = 0; v < kNumVars; ++v) powers[v] = {constant(1)};
  auto power = [&](int v, unsigned n) -> const MPoly& {
    auto& cache = powers[v];
    while (cache.size() <= n) cache.push_back(cache.back() * images[v]);
    return cache[n];
  };
  MPoly r;
  for (const Term& t : terms_) {
    MPoly m(t.coeff);
    for (int v = 0; v < kNumVars; ++v) {
      if (t.exp[v]) m *= power(v, t.exp[v]);
    }
    r += m;
  }
  return r;
}

MPoly MPoly::linear_change_xyz(const std::array<std::array<GaussianRational, 3>, 3>& a) const {
  std::array<MPoly, 6> images;
  for (int v = 0; v < 3; ++v) {
    MPoly img;
    for (int k = 0; k < 3; ++k) img += MPoly::variable(Var(k)).scaled(a[v][k]);
    images[v] = img;
  }
  for (int v = 3; v < kNumVars; ++v) images[v] = MPoly::variable(Var(v));
  return substituted(images);
}

MPoly MPoly::evaluated_var(Var v, const GaussianRational& c) const {
  std::vector<Term> out;
  std::vector<GaussianRational> powers = {GaussianRational(1)};
  for (const Term& t : terms_) {
    while (powers.size() <= t.exp[v]) powers.push_back(powers.back() * c);
    Term s = t;
    s.coeff *= powers[t.exp[v]];
    s.exp[v] = 0;
    out.push_back(std::move(s));
  }
  return from_terms(std::move(out));
}

MPoly MPoly::renamed(Var from, Var to) const {
  if (uses_var(to)) throw ArithmeticError("rename target variable already present");
  std::vector<Term> out = terms_;
  for (Term& t : out) {
    t.exp[to] = std::uint16_t(t.exp[to] + t.exp[from]);
    t.exp[from] = 0;
  }
  return from_terms(std::move(out));
}

GaussianRational MPoly::eval(const std::array<GaussianRational, 6>& pt) const {
  GaussianRational r(0);
  for (const Term& t : terms_) {
    GaussianRational m = t.coeff;
    for (int v = 0; v < kNumVars; ++v) {
      for (unsigned k = 0; k < t.exp[v]; ++k) m *= pt[v];
    }
    r += m;
  }
  return r;
}

std::complex<double> MPoly::eval_complex(const std::array<std::complex<double>, 6>& pt) const {
  std::complex<double> r = 0;
  for (const Term& t : terms_) {
    std::complex<double> m = t.coeff.to_complex();
    for (int v = 0; v < kNumVars; ++v) {
      for (unsigned k = 0; k < t.exp[v]; ++k) m *= pt[v];
    }
    r += m;
  }
  return r;
}

mpq_class MPoly::scalar_content() const {
  mpq_class g(0);
  for (const Term& t : terms_) {
    g = rational_gcd(g, rational_gcd(t.coeff.re(), t.coeff.im()));
  }
  return g;
}

MPoly MPoly::primitive_scaled() const {
  if (is_zero()) return *this;
  mpq_class c = scalar_content();
  return scaled(GaussianRational(mpq_class(1) / c));
}

MPoly MPoly::monic() const {
  if (is_zero()) return *this;
  return scaled(leading_coeff().inverse());
}

mpz_class MPoly::height() const {
  mpz_class h = 0;
  for (const Term& t : terms_) {
    mpz_class th = t.coeff.height();
    if (th > h) h = th;
  }
  return h;
}

std::string MPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const Term& t : terms_) {
    std::string mono;
    for (int v = 0; v < kNumVars; ++v) {
      if (t.exp[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += kVarNames[v];
      if (t.exp[v] > 1) mono += "^" + std::to_string(t.exp[v]);
    }
    const GaussianRational& c = t.coeff;
    bool mixed = sgn(c.re()) != 0 && sgn(c.im()) != 0;
    std::string body;  // coefficient-and-sign handling
    if (mono.empty()) {
      body = c.str();
      if (!first && body[0] != '-') body = "+" + body;
    } else if (mixed) {
      body = "(" + c.str() + ")*" + mono;
      if (!first) body = "+" + body;
    } else {
      GaussianRational a = c;
      std::string sign;
      bool neg = sgn(c.re()) < 0 || sgn(c.im()) < 0;
      if (neg) {
        a = -a;
        sign = "-";
      } else if (!first) {
        sign = "+";
      }
      std::string cs = a.str();
      body = sign + (cs == "1" ? mono : cs + "*" + mono);
    }
    out += body;
    first = false;
  }
  return out;
}

MPoly divide_exact(const MPoly& f, const MPoly& g) {
  if (g.is_zero()) throw ArithmeticError("division by zero polynomial");
  MPoly rem = f, quot;
  const auto& glt = g.leading_term();
  while (!rem.is_zero()) {
    const auto& rlt = rem.leading_term();
    Exponents qe;
    for (int k = 0; k < kNumVars; ++k) {
      if (rlt.exp[k] < glt.exp[k]) throw ArithmeticError("inexact polynomial division");
      qe[k] = std::uint16_t(rlt.exp[k] - glt.exp[k]);
    }
    MPoly qt = MPoly::monomial(rlt.coeff / glt.coeff, qe);
    quot += qt;
    rem -= qt * g;
  }
  return quot;
}

bool divides(const MPoly& g, const MPoly& f) {
  if (g.is_zero()) return f.is_zero();
  MPoly rem = f;
  const auto& glt = g.leading_term();
  while (!rem.is_zero()) {
    const auto& rlt = rem.leading_term();
    bool ok = true;
    Exponents qe;
    for (int k = 0; k < kNumVars; ++k) {
      if (rlt.exp[k] < glt.exp[k]) {
        ok = false;
        break;
      }
      qe[k] = std::uint16_t(rlt.exp[k] - glt.exp[k]);
    }
    if (!ok) return false;
    rem -= MPoly::monomial(rlt.coeff / glt.coeff, qe) * g;
  }
  return true;
}

MPoly nf_mod(const MPoly& f, const MPoly& g) {
  if (g.is_zero()) return f;
  MPoly rem = f, out;
  const auto& glt = g.leading_term();
  while (!rem.is_zero()) {
    const auto& rlt = rem.leading_term();
    bool divisible = true;
    Exponents qe;
    for (int k = 0; k < kNumVars; ++k) {
      if (rlt.exp[k] < glt.exp[k]) {
        divisible = false;
        break;
      }
      qe[k] = std::uint16_t(rlt.exp[k] - glt.exp[k]);
    }
    if (divisible) {
      rem -= MPoly::monomial(rlt.coeff / glt.coeff, qe) * g;
    } else {
      MPoly lt = MPoly::monomial(rlt.coeff, rlt.exp);
      out += lt;
      rem -= lt;
    }
  }
  return out;
}

}  // namespace caustics
