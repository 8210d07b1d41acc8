#include "caustics/rational.hpp"

namespace caustics {

GaussianRational::GaussianRational(long num, long den) : re_(num, den), im_(0) {
  if (den == 0) throw ArithmeticError("division by zero in rational literal");
  re_.canonicalize();
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  // (a+bi)(c+di) = (ac-bd) + (ad+bc)i
  mpq_class a = re_, b = im_;
  re_ = a * o.re_ - b * o.im_;
  im_ = a * o.im_ + b * o.re_;
  return *this;
}

GaussianRational GaussianRational::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw ArithmeticError("division by zero in Q(i)");
  return GaussianRational(re_ / n, -im_ / n);
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  *this *= o.inverse();
  return *this;
}

std::string GaussianRational::str() const {
  auto q_str = [](const mpq_class& q) { return q.get_str(); };
  if (is_zero()) return "0";
  std::string out;
  if (sgn(re_) != 0) out = q_str(re_);
  if (sgn(im_) != 0) {
    mpq_class a = abs(im_);
    std::string part = (a == 1) ? "i" : q_str(a) + "*i";
    if (out.empty()) {
      out = (sgn(im_) < 0 ? "-" : "") + part;
    } else {
      out += (sgn(im_) < 0 ? "-" : "+") + part;
    }
  }
  return out;
}

mpz_class GaussianRational::height() const {
  mpz_class h(abs(re_.get_num()));
  auto bump = [&h](const mpz_class& c) {
    if (c > h) h = c;
  };
  bump(re_.get_den());
  bump(mpz_class(abs(im_.get_num())));
  bump(im_.get_den());
  return h;
}

mpq_class rational_gcd(const mpq_class& a, const mpq_class& b) {
  if (sgn(a) == 0) return abs(b);
  if (sgn(b) == 0) return abs(a);
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
  mpq_class g(num, den);
  g.canonicalize();
  return g;
}

}  // namespace caustics
