#include "qf/poly_io.hpp"

#include <cctype>

namespace qf {

namespace {

std::string abs_str(const mpq_class& q) {
  const mpq_class a = abs(q);
  return a.get_str();
}

std::string monomial_string(const ExpKey& e, int n) {
  std::string s;
  auto append_var = [&](const char* stem, int idx, int pow) {
    if (pow == 0) return;
    if (!s.empty()) s += "*";
    s += stem + std::to_string(idx + 1);
    if (pow > 1) s += "^" + std::to_string(pow);
  };
  for (int k = 0; k < n; ++k) append_var("z", k, e[k]);
  for (int k = 0; k < n; ++k) append_var("Z", k, e[n + k]);
  return s;
}

// sign and unsigned body of one rendered term
std::pair<int, std::string> term_string(const ExpKey& e, const Scalar& c,
                                        int n) {
  std::string vars = monomial_string(e, n);
  if (vars.empty()) {
    // constant term: full scalar rendering, sign folded out for real or
    // purely imaginary values only
    if (c.is_real()) return {sgn(c.re), abs_str(c.re)};
    if (sgn(c.re) == 0) {
      std::string body = (abs(c.im) == 1) ? "i" : abs_str(c.im) + "*i";
      return {sgn(c.im), body};
    }
    return {1, to_string(c)};
  }
  if (c.is_real()) {
    if (abs(c.re) == 1) return {sgn(c.re), vars};
    return {sgn(c.re), abs_str(c.re) + "*" + vars};
  }
  if (sgn(c.re) == 0) {
    std::string coeff = (abs(c.im) == 1) ? "i" : abs_str(c.im) + "*i";
    return {sgn(c.im), coeff + "*" + vars};
  }
  return {1, "(" + to_string(c) + ")*" + vars};
}

}  // namespace

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    auto [sign, body] = term_string(e, c, p.n_vars());
    if (first) {
      if (sign < 0) out += "-";
      out += body;
      first = false;
    } else {
      out += (sign < 0) ? " - " : " + ";
      out += body;
    }
  }
  return out;
}

namespace {

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance() {
    if (pos < src.size() && src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
      advance();
  }

  bool eof() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
};

struct Parser {
  Lexer lx;
  int n_vars;

  Parser(const std::string& s, int n) : lx(s), n_vars(n) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lx.line, lx.col);
  }

  bool starts_primary(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == 'i' ||
           c == 'z' || c == 'Z' || c == '(';
  }

  std::string read_digits() {
    std::string d;
    while (lx.pos < lx.src.size() &&
           std::isdigit(static_cast<unsigned char>(lx.src[lx.pos]))) {
      d += lx.src[lx.pos];
      lx.advance();
    }
    return d;
  }

  Poly parse_primary() {
    char c = lx.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = read_digits();
      mpq_class q(num);
      if (lx.pos < lx.src.size() && lx.src[lx.pos] == '/') {
        lx.advance();
        if (lx.pos >= lx.src.size() ||
            !std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
          fail("expected denominator digits");
        std::string den = read_digits();
        mpq_class d(den);
        if (sgn(d) == 0) fail("zero denominator");
        q /= d;
      }
      return Poly::constant(n_vars, Scalar(q));
    }
    if (c == 'i') {
      lx.advance();
      return Poly::constant(n_vars, Scalar::i());
    }
    if (c == 'z' || c == 'Z') {
      bool conj = (c == 'Z');
      lx.advance();
      if (lx.pos >= lx.src.size() ||
          !std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
        fail("expected variable index");
      std::string idx = read_digits();
      long v = std::stol(idx);
      if (v < 1 || v > n_vars) fail("variable index out of range: " + idx);
      return conj ? Poly::zbar(n_vars, static_cast<int>(v - 1))
                  : Poly::zvar(n_vars, static_cast<int>(v - 1));
    }
    if (c == '(') {
      lx.advance();
      Poly e = parse_expr();
      if (lx.peek() != ')') fail("expected ')'");
      lx.advance();
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Poly parse_factor() {
    Poly base = parse_primary();
    if (lx.peek() == '^') {
      lx.advance();
      if (lx.pos >= lx.src.size() ||
          !std::isdigit(static_cast<unsigned char>(lx.src[lx.pos])))
        fail("expected exponent digits");
      long k = std::stol(read_digits());
      if (k > 512) fail("exponent too large");
      Poly r = Poly::constant(n_vars, 1);
      for (long t = 0; t < k; ++t) r *= base;
      return r;
    }
    return base;
  }

  Poly parse_term() {
    Poly r = parse_factor();
    for (;;) {
      char c = lx.peek();
      if (c == '*') {
        lx.advance();
        r *= parse_factor();
      } else if (starts_primary(c)) {
        r *= parse_factor();  // implicit multiplication
      } else {
        return r;
      }
    }
  }

  Poly parse_expr() {
    Poly r(n_vars);
    int sign = 1;
    char c = lx.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1 : 1;
      lx.advance();
    }
    r += Scalar(sign) * parse_term();
    for (;;) {
      c = lx.peek();
      if (c == '+' || c == '-') {
        lx.advance();
        Poly t = parse_term();
        if (c == '-')
          r -= t;
        else
          r += t;
      } else {
        return r;
      }
    }
  }

  Poly run() {
    if (lx.eof()) fail("empty polynomial");
    Poly r = parse_expr();
    if (!lx.eof()) fail("trailing input");
    return r;
  }
};

}  // namespace

Poly parse_poly(const std::string& text, int n_vars) {
  if (n_vars <= 0) throw std::invalid_argument("n_vars must be positive");
  return Parser(text, n_vars).run();
}

}  // namespace qf
