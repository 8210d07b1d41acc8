#include "doctest.h"

#include "caustics/rational.hpp"

using caustics::GaussianRational;

namespace {
GaussianRational gr(long re_n, long re_d, long im_n, long im_d) {
  return GaussianRational(mpq_class(re_n, re_d), mpq_class(im_n, im_d));
}
}  // namespace

TEST_CASE("field axioms on a fixed grid") {
  // Small deterministic grid standing in for randomized field-law checks.
  std::vector<GaussianRational> vals;
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) vals.push_back(gr(a, 3, b, 2));
  for (const auto& p : vals) {
    for (const auto& q : vals) {
      CHECK(p + q == q + p);
      CHECK(p * q == q * p);
      CHECK((p - q) + q == p);
      if (!q.is_zero()) CHECK((p / q) * q == p);
    }
  }
}

TEST_CASE("i^2 = -1 and conjugation") {
  GaussianRational i = GaussianRational::i();
  CHECK(i * i == GaussianRational(-1));
  GaussianRational z = gr(3, 2, -5, 7);
  CHECK(z.conj().conj() == z);
  CHECK((z * z.conj()).is_real());
  CHECK((z * z.conj()).re() == z.norm());
}

TEST_CASE("inverse of (1+i)") {
  GaussianRational z(mpq_class(1), mpq_class(1));
  GaussianRational inv = z.inverse();
  CHECK(inv == gr(1, 2, -1, 2));
  CHECK(z * inv == GaussianRational(1));
}

TEST_CASE("division by zero raises") {
  CHECK_THROWS_AS(GaussianRational(1) / GaussianRational(0), caustics::ArithmeticError);
}

TEST_CASE("canonical literals") {
  CHECK(GaussianRational(0).str() == "0");
  CHECK(GaussianRational(-7).str() == "-7");
  CHECK(gr(3, 2, 0, 1).str() == "3/2");
  CHECK(GaussianRational::i().str() == "i");
  CHECK((-GaussianRational::i()).str() == "-i");
  CHECK(gr(0, 1, 2, 5).str() == "2/5*i");
  CHECK(gr(1, 2, 3, 1).str() == "1/2+3*i");
  CHECK(gr(1, 1, -1, 1).str() == "1-i");
}

TEST_CASE("rational gcd helper") {
  CHECK(caustics::rational_gcd(mpq_class(4, 3), mpq_class(2, 9)) == mpq_class(2, 9));
  CHECK(caustics::rational_gcd(mpq_class(0), mpq_class(-5, 2)) == mpq_class(5, 2));
  CHECK(caustics::rational_gcd(mpq_class(0), mpq_class(0)) == 0);
}
