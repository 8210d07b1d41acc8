#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>

#include "caustics/errors.hpp"

namespace caustics {

/// Element of Q(i): exact rational real and imaginary parts.
/// mpq_class keeps both parts canonical (lowest terms, positive denominator).
class GaussianRational {
public:
  GaussianRational() : re_(0), im_(0) {}
  GaussianRational(long n) : re_(n), im_(0) {}  // NOLINT: implicit by design
  GaussianRational(const mpq_class& re) : re_(re), im_(0) { re_.canonicalize(); }
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussianRational(long num, long den);

  static GaussianRational i() { return GaussianRational(mpq_class(0), mpq_class(1)); }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussianRational conj() const { return GaussianRational(re_, -im_); }
  /// |z|^2 = re^2 + im^2, an exact nonnegative rational.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return GaussianRational(-re_, -im_); }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);
  GaussianRational inverse() const;

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Canonical literal, parseable by the polynomial grammar: "0", "-3/2",
  /// "i", "-2*i", "1/2+3*i", "1-i".  Never parenthesized.
  std::string str() const;

  /// max(|num|, |den|) over both parts; crude height for size bookkeeping.
  mpz_class height() const;

private:
  mpq_class re_, im_;
};

/// gcd of two rationals: gcd(nums)/lcm(dens); gcd(0,0) = 0.  Result >= 0.
mpq_class rational_gcd(const mpq_class& a, const mpq_class& b);

}  // namespace caustics
