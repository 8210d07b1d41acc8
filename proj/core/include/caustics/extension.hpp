#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caustics/polyops.hpp"
#include "caustics/rational.hpp"

namespace caustics {

/// Control-flow signal of dynamic evaluation: a zero-test or inversion hit a
/// zero divisor, exposing a proper factor of the working modulus.  Callers at
/// the top of a computation catch this, split the modulus, and re-run per
/// factor.  Deliberately not derived from Error: it must never be swallowed
/// by generic error handling.
struct SplitRequired {
  UPoly factor;  // monic, proper divisor of the modulus
};

/// Monic square-free modulus m(t) over Q(i) defining the ring Q(i)[t]/(m).
/// The ring is a product of fields; elements behave as field elements until a
/// zero divisor forces a split.
class ExtModulus {
public:
  explicit ExtModulus(UPoly m);
  const UPoly& poly() const { return m_; }
  int degree() const { return upoly_deg(m_); }

private:
  UPoly m_;
};

using ExtModulusPtr = std::shared_ptr<const ExtModulus>;

/// Element of Q(i)[t]/(m): a residue represented by a polynomial of degree
/// < deg m.  Zero-tests and inversions may throw SplitRequired.
class ExtElem {
public:
  ExtElem() = default;  // zero over a null modulus; usable only after rebind
  ExtElem(ExtModulusPtr mod, UPoly rep);
  static ExtElem from_base(ExtModulusPtr mod, const GaussianRational& c);
  static ExtElem generator(ExtModulusPtr mod);

  const ExtModulusPtr& modulus() const { return mod_; }
  const UPoly& rep() const { return rep_; }

  /// Exact zero-test: true/false when uniform across all residue factors,
  /// SplitRequired otherwise.
  bool is_zero() const;
  /// The element as a base-field constant; requires rep degree <= 0.
  GaussianRational as_base() const;
  /// True when the residue is a base-field constant.
  bool is_base() const { return static_cast<int>(rep_.size()) <= 1; }

  ExtElem operator-() const;
  ExtElem& operator+=(const ExtElem& o);
  ExtElem& operator-=(const ExtElem& o);
  ExtElem& operator*=(const ExtElem& o);
  ExtElem& operator/=(const ExtElem& o);
  friend ExtElem operator+(ExtElem a, const ExtElem& b) { return a += b; }
  friend ExtElem operator-(ExtElem a, const ExtElem& b) { return a -= b; }
  friend ExtElem operator*(ExtElem a, const ExtElem& b) { return a *= b; }
  friend ExtElem operator/(ExtElem a, const ExtElem& b) { return a /= b; }
  friend bool operator==(const ExtElem& a, const ExtElem& b) { return (a - b).is_zero(); }
  friend bool operator!=(const ExtElem& a, const ExtElem& b) { return !(a == b); }

  /// Multiplicative inverse; SplitRequired on a zero divisor, error on zero.
  ExtElem inverse() const;

  std::string str() const;

private:
  void reduce();
  ExtModulusPtr mod_;
  UPoly rep_;
};

/// Square root over Q(i), when one exists.
std::optional<GaussianRational> rational_sqrt(const GaussianRational& x);

/// Square root in Q(i)[t]/(m) for deg m <= 2 (the supported tower height);
/// may throw SplitRequired while testing candidates.
std::optional<ExtElem> ext_sqrt(const ExtElem& x);

/// Roots of a*X^2 + b*X + c over Q(i) (a may be zero: linear case).
std::vector<GaussianRational> rational_quadratic_roots(const GaussianRational& a,
                                                       const GaussianRational& b,
                                                       const GaussianRational& c);

/// Roots of a*X^2 + b*X + c with coefficients in one extension ring.
std::vector<ExtElem> ext_quadratic_roots(const ExtElem& a, const ExtElem& b,
                                         const ExtElem& c);

/// Run `fn` over Q(i)[t]/(m), splitting the modulus whenever dynamic
/// evaluation demands it; returns one (modulus, result) pair per final
/// residue factor, in a deterministic order.
template <class Fn>
auto with_modulus_splitting(const UPoly& modulus, Fn&& fn)
    -> std::vector<std::pair<UPoly, decltype(fn(std::declval<ExtModulusPtr>()))>> {
  using R = decltype(fn(std::declval<ExtModulusPtr>()));
  std::vector<UPoly> work{modulus};
  std::vector<std::pair<UPoly, R>> out;
  while (!work.empty()) {
    UPoly m = work.back();
    work.pop_back();
    try {
      auto mod = std::make_shared<const ExtModulus>(m);
      out.emplace_back(m, fn(mod));
    } catch (const SplitRequired& s) {
      UPoly g = s.factor;
      UPoly rest = upoly_divrem(m, g).first;
      work.push_back(std::move(rest));
      work.push_back(std::move(g));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    for (size_t k = a.first.size(); k-- > 0;) {
      if (!(a.first[k] == b.first[k])) return a.first[k].str() < b.first[k].str();
    }
    return false;
  });
  return out;
}

/// Uniform facade over the two coefficient fields used by the local analysis:
/// Q(i) itself and one dynamic-evaluation extension of it.
template <class K>
struct FieldTraits;

template <>
struct FieldTraits<GaussianRational> {
  static GaussianRational from_base(const GaussianRational& c, const GaussianRational&) {
    return c;
  }
  static bool is_zero(const GaussianRational& x) { return x.is_zero(); }
  static GaussianRational inverse(const GaussianRational& x) { return x.inverse(); }
  static std::string str(const GaussianRational& x) { return x.str(); }
};

template <>
struct FieldTraits<ExtElem> {
  static ExtElem from_base(const GaussianRational& c, const ExtElem& context) {
    return ExtElem::from_base(context.modulus(), c);
  }
  static bool is_zero(const ExtElem& x) { return x.is_zero(); }
  static ExtElem inverse(const ExtElem& x) { return x.inverse(); }
  static std::string str(const ExtElem& x) { return x.str(); }
};

}  // namespace caustics
