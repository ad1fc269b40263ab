#include "bisurf/ring.hpp"

#include <cctype>
#include <optional>
#include <sstream>
#include <utility>

namespace bisurf {

std::size_t BiDegree::dim() const {
  if (!nonnegative()) return 0;
  return static_cast<std::size_t>(d1 + 1) * static_cast<std::size_t>(d2 + 1);
}

std::string BiDegree::str() const {
  return "(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
}

namespace {

void append_power(std::ostringstream& os, bool& first, std::string_view var, int e) {
  if (e == 0) return;
  if (!first) os << '*';
  first = false;
  os << var;
  if (e > 1) os << '^' << e;
}

// Shared by both renderers: sign handling and coefficient display.
template <class Terms, class MonoStr>
std::string render_terms(const Terms& terms, MonoStr&& mono_str) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first_term = true;
  for (const auto& [mono, c] : terms) {
    Rational mag = abs(c);
    bool neg = sgn(c) < 0;
    if (first_term) {
      if (neg) os << '-';
    } else {
      os << (neg ? " - " : " + ");
    }
    first_term = false;
    std::string m = mono_str(mono);
    if (m.empty()) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << m;
    } else {
      os << mag.get_str() << '*' << m;
    }
  }
  return os.str();
}

// Recursive-descent reader for
//   poly   := term (("+"|"-") term)* | "0"
//   term   := [sign] [coeff ["*"]] factor ("*" factor)* | [sign] coeff
//   coeff  := integer | integer "/" integer
//   factor := var ["^" integer]
// Variables are resolved through `var_index`, which returns the slot of the
// variable starting at the current position and its length, or nullopt.
struct RawTerm {
  Rational coeff;
  std::array<int, 4> exps{};
  std::size_t position = 0;
};

template <class VarIndex>
class TermReader {
 public:
  TermReader(std::string_view text, VarIndex var_index) : text_(text), var_index_(var_index) {}

  std::vector<RawTerm> read_poly() {
    std::vector<RawTerm> out;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    out.push_back(read_term(true));
    while (true) {
      skip_ws();
      if (at_end()) break;
      char c = text_[pos_];
      if (c != '+' && c != '-') fail(std::string("expected '+' or '-', found '") + c + "'");
      out.push_back(read_term(true));
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }
  bool at_end() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::optional<mpz_class> read_integer() {
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) return std::nullopt;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  RawTerm read_term(bool allow_sign) {
    RawTerm term;
    term.coeff = 1;
    skip_ws();
    term.position = pos_;
    int sign = 1;
    while (allow_sign && !at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
      skip_ws();
    }
    bool have_coeff = false;
    if (auto num = read_integer()) {
      have_coeff = true;
      mpz_class den = 1;
      skip_ws();
      if (!at_end() && text_[pos_] == '/') {
        ++pos_;
        auto d = read_integer();
        if (!d) fail("expected denominator");
        if (*d == 0) fail("zero denominator");
        den = *d;
      }
      term.coeff = Rational(*num, den);
      term.coeff.canonicalize();
      skip_ws();
      if (!at_end() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        if (!read_factor(term)) fail("expected variable after '*'");
      } else if (!read_factor(term)) {
        term.coeff *= sign;
        return term;
      }
    } else if (!read_factor(term)) {
      fail(at_end() ? "unexpected end of input" : std::string("unexpected character '") + text_[pos_] + "'");
    }
    (void)have_coeff;
    while (true) {
      skip_ws();
      if (at_end() || text_[pos_] != '*') break;
      ++pos_;
      skip_ws();
      if (!read_factor(term)) fail("expected variable after '*'");
    }
    term.coeff *= sign;
    return term;
  }

  bool read_factor(RawTerm& term) {
    skip_ws();
    if (at_end()) return false;
    auto hit = var_index_(text_.substr(pos_));
    if (!hit) return false;
    auto [slot, len] = *hit;
    pos_ += len;
    int e = 1;
    skip_ws();
    if (!at_end() && text_[pos_] == '^') {
      ++pos_;
      auto n = read_integer();
      if (!n) fail("expected exponent");
      if (!n->fits_sint_p()) fail("exponent too large");
      e = static_cast<int>(n->get_si());
    }
    term.exps[slot] += e;
    return true;
  }

  std::string_view text_;
  VarIndex var_index_;
  std::size_t pos_ = 0;
};

std::optional<std::pair<std::size_t, std::size_t>> bihom_var(std::string_view rest) {
  switch (rest.front()) {
    case 's': return std::pair<std::size_t, std::size_t>{0, 1};
    case 'u': return std::pair<std::size_t, std::size_t>{1, 1};
    case 't': return std::pair<std::size_t, std::size_t>{2, 1};
    case 'v': return std::pair<std::size_t, std::size_t>{3, 1};
    default: return std::nullopt;
  }
}

std::optional<std::pair<std::size_t, std::size_t>> x_var(std::string_view rest) {
  if (rest.size() >= 2 && rest[0] == 'x' && rest[1] >= '0' && rest[1] <= '3')
    return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(rest[1] - '0'), 2};
  return std::nullopt;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what), position_(position) {}

bool BiMonomialDescending::operator()(const BiMonomial& a, const BiMonomial& b) const {
  int da = a.es + a.eu + a.et + a.ev, db = b.es + b.eu + b.et + b.ev;
  if (da != db) return da > db;
  if (a.es != b.es) return a.es > b.es;
  if (a.eu != b.eu) return a.eu > b.eu;
  if (a.et != b.et) return a.et > b.et;
  return a.ev > b.ev;
}

std::string BiMonomial::str() const {
  std::ostringstream os;
  bool first = true;
  append_power(os, first, "s", es);
  append_power(os, first, "u", eu);
  append_power(os, first, "t", et);
  append_power(os, first, "v", ev);
  return os.str();
}

std::size_t basis_index(const BiMonomial& m) {
  BiDegree d = m.bidegree();
  return static_cast<std::size_t>(d.d1 - m.es) * static_cast<std::size_t>(d.d2 + 1) +
         static_cast<std::size_t>(d.d2 - m.et);
}

std::vector<BiMonomial> monomial_basis(BiDegree d) {
  std::vector<BiMonomial> out;
  if (!d.nonnegative()) return out;
  out.reserve(d.dim());
  for (int es = d.d1; es >= 0; --es)
    for (int et = d.d2; et >= 0; --et) out.push_back({es, d.d1 - es, et, d.d2 - et});
  return out;
}

BihomPoly::BihomPoly(BiDegree d, Terms terms) : bidegree_(d) {
  for (auto& [m, c] : terms) {
    if (!(m.bidegree() == d))
      throw BidegreeError("monomial " + m.str() + " has bidegree " + m.bidegree().str() +
                          ", expected " + d.str());
    add_term(m, c);
  }
}

BihomPoly BihomPoly::monomial(const BiMonomial& m, Rational c) {
  BihomPoly p(m.bidegree());
  p.add_term(m, c);
  return p;
}

Rational BihomPoly::coefficient(const BiMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

void BihomPoly::add_term(const BiMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BihomPoly& BihomPoly::operator+=(const BihomPoly& o) {
  if (!(o.bidegree_ == bidegree_))
    throw BidegreeError("adding bidegree " + o.bidegree_.str() + " to " + bidegree_.str());
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

BihomPoly BihomPoly::operator+(const BihomPoly& o) const {
  BihomPoly r = *this;
  r += o;
  return r;
}

BihomPoly BihomPoly::operator-(const BihomPoly& o) const { return *this + o * Rational(-1); }

BihomPoly BihomPoly::operator*(const Rational& c) const {
  BihomPoly r(bidegree_);
  if (c == 0) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
  return r;
}

BihomPoly BihomPoly::operator*(const BihomPoly& o) const {
  BihomPoly r(bidegree_ + o.bidegree_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

BihomPoly mul(const BihomPoly& f, const BihomPoly& g) { return f * g; }

BihomPoly parse(std::string_view text, const BiDegree* declared) {
  TermReader reader(text, bihom_var);
  std::vector<RawTerm> raw = reader.read_poly();

  std::optional<BiDegree> degree;
  if (declared) degree = *declared;
  const RawTerm* witness = nullptr;
  BihomPoly::Terms terms;
  std::vector<std::pair<BiMonomial, Rational>> collected;
  for (const RawTerm& t : raw) {
    BiMonomial m{t.exps[0], t.exps[1], t.exps[2], t.exps[3]};
    bool constant_zero = t.coeff == 0 && m == BiMonomial{};
    if (constant_zero) continue;
    if (!degree) {
      degree = m.bidegree();
      witness = &t;
    } else if (!(m.bidegree() == *degree)) {
      std::string first = witness ? BiMonomial{witness->exps[0], witness->exps[1], witness->exps[2],
                                               witness->exps[3]}
                                        .str()
                                  : std::string("declared");
      if (first.empty()) first = "1";
      std::string second = m.str().empty() ? "1" : m.str();
      throw ParseError("mixed bidegree: " + first + " has bidegree " + degree->str() + " but " +
                           second + " has bidegree " + m.bidegree().str(),
                       t.position);
    }
    collected.emplace_back(m, t.coeff);
  }
  if (!degree) {
    // only "0" terms
    return BihomPoly(BiDegree{});
  }
  BihomPoly out(*degree);
  for (auto& [m, c] : collected) out += BihomPoly::monomial(m, c);
  return out;
}

BihomPoly parse(std::string_view text, BiDegree declared) { return parse(text, &declared); }

std::string render(const BihomPoly& f) {
  return render_terms(f.terms(), [](const BiMonomial& m) { return m.str(); });
}

namespace {

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

Rational evaluate(const BihomPoly& f, const Point4& p) {
  Rational acc = 0;
  for (const auto& [m, c] : f.terms())
    acc += c * power(p[0], m.es) * power(p[1], m.eu) * power(p[2], m.et) * power(p[3], m.ev);
  return acc;
}

RatVector coeff_vector(const BihomPoly& f, const std::vector<BiMonomial>& basis) {
  RatVector v(basis.size());
  if (basis.empty()) return v;
  BiDegree d = basis.front().bidegree();
  if (!(d == f.bidegree()))
    throw BidegreeError("polynomial bidegree " + f.bidegree().str() + " does not match basis " +
                        d.str());
  for (std::size_t i = 0; i < basis.size(); ++i) v[i] = f.coefficient(basis[i]);
  return v;
}

BihomPoly from_coeff_vector(std::span<const Rational> v, BiDegree d) {
  auto basis = monomial_basis(d);
  if (v.size() != basis.size())
    throw BidegreeError("vector length " + std::to_string(v.size()) + " does not match R" +
                        d.str());
  BihomPoly::Terms terms;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) terms.emplace(basis[i], v[i]);
  return BihomPoly(d, std::move(terms));
}

// ---------------------------------------------------------------------------

bool XMonomialDescending::operator()(const XMonomial& a, const XMonomial& b) const {
  int da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  for (std::size_t i = 0; i < 4; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  return false;
}

std::string XMonomial::str() const {
  static constexpr std::string_view names[] = {"x0", "x1", "x2", "x3"};
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < 4; ++i) append_power(os, first, names[i], e[i]);
  return os.str();
}

std::vector<XMonomial> x_monomials(int degree) {
  std::vector<XMonomial> out;
  for (int a = degree; a >= 0; --a)
    for (int b = degree - a; b >= 0; --b)
      for (int c = degree - a - b; c >= 0; --c) out.push_back({{a, b, c, degree - a - b - c}});
  return out;
}

XPoly::XPoly(Terms terms) {
  for (auto& [m, c] : terms) add_term(m, c);
}

XPoly XPoly::constant(Rational c) { return monomial(XMonomial{}, std::move(c)); }

XPoly XPoly::monomial(const XMonomial& m, Rational c) {
  XPoly p;
  p.add_term(m, c);
  return p;
}

void XPoly::add_term(const XMonomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational XPoly::coefficient(const XMonomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

int XPoly::degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

bool XPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  return terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
}

XPoly& XPoly::operator+=(const XPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

XPoly XPoly::operator+(const XPoly& o) const {
  XPoly r = *this;
  r += o;
  return r;
}

XPoly XPoly::operator-() const { return *this * Rational(-1); }

XPoly XPoly::operator-(const XPoly& o) const {
  XPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

XPoly XPoly::operator*(const Rational& c) const {
  XPoly r;
  if (c == 0) return r;
  for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
  return r;
}

XPoly XPoly::operator*(const XPoly& o) const {
  XPoly r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Rational evaluate(const XPoly& f, const Point4& x) {
  Rational acc = 0;
  for (const auto& [m, c] : f.terms()) {
    Rational term = c;
    for (std::size_t i = 0; i < 4; ++i) term *= power(x[i], m.e[i]);
    acc += term;
  }
  return acc;
}

XPoly substitute_linear(const XPoly& f, const std::array<std::array<Rational, 4>, 4>& change) {
  std::array<XPoly, 4> forms;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      forms[i].add_term(XMonomial::var(static_cast<int>(j)), change[i][j]);
  XPoly out;
  for (const auto& [m, c] : f.terms()) {
    XPoly term = XPoly::constant(c);
    for (std::size_t i = 0; i < 4; ++i)
      for (int k = 0; k < m.e[i]; ++k) term = term * forms[i];
    out += term;
  }
  return out;
}

XPoly parse_x(std::string_view text) {
  TermReader reader(text, x_var);
  XPoly out;
  for (const RawTerm& t : reader.read_poly()) out.add_term(XMonomial{t.exps}, t.coeff);
  return out;
}

std::string render(const XPoly& f) {
  return render_terms(f.terms(), [](const XMonomial& m) { return m.str(); });
}

}  // namespace bisurf
