#include "caustics/parse.hpp"

#include <cctype>

#include "caustics/errors.hpp"

namespace caustics {
namespace {

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!eat(c)) throw ParseError(std::string("expected ") + what, pos);
  }
};

class Parser {
public:
  Parser(Cursor& cur, const std::vector<Var>& allowed) : cur_(cur), allowed_(allowed) {}

  MPoly expr() {
    bool neg = false;
    if (cur_.eat('-')) {
      neg = true;
    } else {
      cur_.eat('+');
    }
    MPoly r = term();
    if (neg) r = -r;
    while (true) {
      if (cur_.eat('+')) {
        r += term();
      } else if (cur_.eat('-')) {
        r -= term();
      } else {
        break;
      }
    }
    return r;
  }

private:
  MPoly term() {
    MPoly r = factor();
    while (cur_.eat('*')) r *= factor();
    // Reject implicit multiplication: a base may only be followed by an
    // operator, a closing bracket, or the end of input.
    char c = cur_.peek();
    if (c != '\0' && c != '+' && c != '-' && c != '*' && c != ')' && c != ':' && c != ']') {
      throw ParseError("unexpected character (implicit multiplication is not allowed)", cur_.pos);
    }
    return r;
  }

  MPoly factor() {
    MPoly b = base();
    if (cur_.eat('^')) {
      unsigned long e = natural("exponent");
      if (e > 600) throw ParseError("exponent too large", cur_.pos);
      return b.pow(unsigned(e));
    }
    return b;
  }

  MPoly base() {
    char c = cur_.peek();
    if (c == '(') {
      cur_.eat('(');
      MPoly r = expr();
      cur_.expect(')', "')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational_literal();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    throw ParseError("expected a coefficient, variable, or '('", cur_.pos);
  }

  MPoly rational_literal() {
    mpz_class num = integer("integer literal");
    if (cur_.eat('/')) {
      std::size_t at = cur_.pos;
      mpz_class den = integer("denominator");
      if (sgn(den) == 0) throw ParseError("division by zero in coefficient literal", at);
      mpq_class q(num, den);
      q.canonicalize();
      return MPoly(GaussianRational(q));
    }
    return MPoly(GaussianRational(mpq_class(num)));
  }

  mpz_class integer(const char* what) {
    cur_.skip_ws();
    std::size_t start = cur_.pos;
    while (cur_.pos < cur_.s.size() && std::isdigit(static_cast<unsigned char>(cur_.s[cur_.pos]))) {
      ++cur_.pos;
    }
    if (cur_.pos == start) throw ParseError(std::string("expected ") + what, cur_.pos);
    return mpz_class(cur_.s.substr(start, cur_.pos - start));
  }

  unsigned long natural(const char* what) { return integer(what).get_ui(); }

  MPoly name() {
    cur_.skip_ws();
    std::size_t start = cur_.pos;
    while (cur_.pos < cur_.s.size() && std::isalpha(static_cast<unsigned char>(cur_.s[cur_.pos]))) {
      ++cur_.pos;
    }
    std::string id = cur_.s.substr(start, cur_.pos - start);
    if (id == "i") return MPoly(GaussianRational::i());
    for (int v = 0; v < kNumVars; ++v) {
      if (id == kVarNames[v]) {
        for (Var a : allowed_) {
          if (a == v) return MPoly::variable(Var(v));
        }
        throw ParseError("variable '" + id + "' not allowed here", start);
      }
    }
    throw ParseError("unknown variable '" + id + "'", start);
  }

  Cursor& cur_;
  const std::vector<Var>& allowed_;
};

MPoly parse_with(Cursor& cur, const std::vector<Var>& allowed) {
  Parser p(cur, allowed);
  MPoly r = p.expr();
  return r;
}

}  // namespace

MPoly parse_poly(const std::string& text, const std::vector<Var>& allowed) {
  Cursor cur{text};
  MPoly r = parse_with(cur, allowed);
  if (!cur.done()) throw ParseError("trailing input", cur.pos);
  return r;
}

MPoly parse_poly(const std::string& text) {
  return parse_poly(text, {VX, VY, VZ, VU, VV, VW});
}

GaussianRational parse_coefficient(const std::string& text) {
  MPoly p = parse_poly(text, {});
  if (!p.is_constant()) throw ParseError("expected a constant expression", 0);
  return p.is_zero() ? GaussianRational(0) : p.leading_coeff();
}

std::array<GaussianRational, 3> parse_triple(const std::string& text) {
  Cursor cur{text};
  cur.expect('[', "'['");
  std::array<GaussianRational, 3> out;
  static const std::vector<Var> none{};
  for (int k = 0; k < 3; ++k) {
    MPoly p = parse_with(cur, none);
    if (!p.is_constant()) throw ParseError("expected a constant entry", cur.pos);
    out[k] = p.is_zero() ? GaussianRational(0) : p.leading_coeff();
    if (k < 2) cur.expect(':', "':'");
  }
  cur.expect(']', "']'");
  if (!cur.done()) throw ParseError("trailing input", cur.pos);
  return out;
}

std::string triple_str(const std::array<GaussianRational, 3>& t) {
  return "[" + t[0].str() + ":" + t[1].str() + ":" + t[2].str() + "]";
}

}  // namespace caustics
