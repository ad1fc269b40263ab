#pragma once

// Bigraded polynomials in R = Q[s,u,t,v] and homogeneous polynomials in the
// image coordinates x0..x3, both with exact rational coefficients.

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bisurf {

using Rational = mpq_class;
using RatVector = std::vector<Rational>;

struct BiDegree {
  int d1 = 0;  // degree in s,u
  int d2 = 0;  // degree in t,v

  friend bool operator==(const BiDegree&, const BiDegree&) = default;
  friend BiDegree operator+(BiDegree a, BiDegree b) { return {a.d1 + b.d1, a.d2 + b.d2}; }
  friend BiDegree operator-(BiDegree a, BiDegree b) { return {a.d1 - b.d1, a.d2 - b.d2}; }

  /// Componentwise partial order.
  bool leq(BiDegree other) const { return d1 <= other.d1 && d2 <= other.d2; }
  bool nonnegative() const { return d1 >= 0 && d2 >= 0; }
  /// (d1+1)(d2+1), the dimension of R_{d1,d2}.
  std::size_t dim() const;
  std::string str() const;
};

/// s^es u^eu t^et v^ev.
struct BiMonomial {
  int es = 0, eu = 0, et = 0, ev = 0;

  BiDegree bidegree() const { return {es + eu, et + ev}; }
  BiMonomial operator*(const BiMonomial& o) const {
    return {es + o.es, eu + o.eu, et + o.et, ev + o.ev};
  }
  friend bool operator==(const BiMonomial&, const BiMonomial&) = default;
  std::string str() const;
};

/// Graded lex with s > u > t > v, greatest first.
struct BiMonomialDescending {
  bool operator()(const BiMonomial& a, const BiMonomial& b) const;
};

/// Position of `mono` inside monomial_basis(mono.bidegree()).
std::size_t basis_index(const BiMonomial& mono);

/// All monomials of bidegree d, in descending canonical order.
std::vector<BiMonomial> monomial_basis(BiDegree d);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BidegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BihomPoly {
 public:
  using Terms = std::map<BiMonomial, Rational, BiMonomialDescending>;

  explicit BihomPoly(BiDegree d = {}) : bidegree_(d) {}
  /// Throws BidegreeError if some monomial does not have bidegree d.
  BihomPoly(BiDegree d, Terms terms);

  static BihomPoly monomial(const BiMonomial& m, Rational c = 1);

  BiDegree bidegree() const { return bidegree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const BiMonomial& m) const;

  BihomPoly operator+(const BihomPoly& o) const;
  BihomPoly operator-(const BihomPoly& o) const;
  BihomPoly operator*(const BihomPoly& o) const;
  BihomPoly operator*(const Rational& c) const;
  BihomPoly& operator+=(const BihomPoly& o);

  friend bool operator==(const BihomPoly& a, const BihomPoly& b) {
    return a.bidegree_ == b.bidegree_ && a.terms_ == b.terms_;
  }

 private:
  void add_term(const BiMonomial& m, const Rational& c);

  BiDegree bidegree_;
  Terms terms_;
};

BihomPoly mul(const BihomPoly& f, const BihomPoly& g);

/// Parses the polynomial grammar. The bidegree is taken from the first term;
/// "0" needs `declared`. When `declared` is given every term must match it.
BihomPoly parse(std::string_view text, const BiDegree* declared = nullptr);
BihomPoly parse(std::string_view text, BiDegree declared);

/// Canonical rendering; parse(render(f), f.bidegree()) == f.
std::string render(const BihomPoly& f);

using Point4 = std::array<Rational, 4>;

/// Exact value at (s,u,t,v).
Rational evaluate(const BihomPoly& f, const Point4& point);

/// v[i] = coefficient of basis[i]. Throws BidegreeError on mismatch.
RatVector coeff_vector(const BihomPoly& f, const std::vector<BiMonomial>& basis);
/// Inverse of coeff_vector.
BihomPoly from_coeff_vector(std::span<const Rational> v, BiDegree d);

// ---------------------------------------------------------------------------
// Image-side polynomials

struct XMonomial {
  std::array<int, 4> e{};

  int degree() const { return e[0] + e[1] + e[2] + e[3]; }
  XMonomial operator*(const XMonomial& o) const {
    return {{e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]}};
  }
  friend bool operator==(const XMonomial&, const XMonomial&) = default;
  std::string str() const;

  static XMonomial var(int i) {
    XMonomial m;
    m.e[static_cast<std::size_t>(i)] = 1;
    return m;
  }
  static XMonomial product(int i, int j) { return var(i) * var(j); }
};

struct XMonomialDescending {
  bool operator()(const XMonomial& a, const XMonomial& b) const;
};

/// Monomials of total degree `degree` in x0..x3, descending graded lex.
std::vector<XMonomial> x_monomials(int degree);

class XPoly {
 public:
  using Terms = std::map<XMonomial, Rational, XMonomialDescending>;

  XPoly() = default;
  explicit XPoly(Terms terms);
  static XPoly constant(Rational c);
  static XPoly monomial(const XMonomial& m, Rational c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Rational coefficient(const XMonomial& m) const;
  /// -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;

  XPoly operator+(const XPoly& o) const;
  XPoly operator-(const XPoly& o) const;
  XPoly operator-() const;
  XPoly operator*(const XPoly& o) const;
  XPoly operator*(const Rational& c) const;
  XPoly& operator+=(const XPoly& o);
  void add_term(const XMonomial& m, const Rational& c);

  friend bool operator==(const XPoly&, const XPoly&) = default;

 private:
  Terms terms_;
};

Rational evaluate(const XPoly& f, const Point4& x);

/// Substitutes x_i -> sum_j change[i][j] x_j.
XPoly substitute_linear(const XPoly& f, const std::array<std::array<Rational, 4>, 4>& change);

/// Grammar as for BihomPoly with variables x0..x3.
XPoly parse_x(std::string_view text);
std::string render(const XPoly& f);

}  // namespace bisurf
