#include "bisurf/linalg.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace bisurf {

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
  if (rows.empty()) return {};
  RatMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw std::invalid_argument("ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatVector RatMatrix::column(std::size_t c) const {
  RatVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
  RatMatrix p(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
    }
  return p;
}

RatVector RatMatrix::operator*(std::span<const Rational> v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
  RatVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if ((*this)(i, k) != 0 && v[k] != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

RatMatrix RatMatrix::select_columns(std::span<const std::size_t> order) const {
  RatMatrix out(rows_, order.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < order.size(); ++c) out(r, c) = (*this)(r, order[c]);
  return out;
}

namespace {

using IntRows = std::vector<std::vector<mpz_class>>;

// Each row scaled by the lcm of its denominators. `scales` receives the
// multipliers so determinants can be recovered.
IntRows integerize(const RatMatrix& a, std::size_t extra_identity_cols,
                   std::vector<mpz_class>* scales = nullptr) {
  IntRows m(a.rows(), std::vector<mpz_class>(a.cols() + extra_identity_cols));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    mpz_class l = 1;
    for (const Rational& q : a.row(r)) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const Rational& q = a(r, c);
      if (q == 0) continue;
      m[r][c] = q.get_num() * (l / q.get_den());
    }
    if (extra_identity_cols) m[r][a.cols() + r] = l;
    if (scales) scales->push_back(l);
  }
  return m;
}

struct ForwardResult {
  std::vector<std::size_t> pivots;
  int sign = 1;  // parity of row swaps
};

// Fraction-free forward elimination restricted to the first `pivot_cols`
// columns. Entries stay integral because each is a minor of the input.
ForwardResult bareiss_forward(IntRows& m, std::size_t pivot_cols) {
  ForwardResult res;
  const std::size_t rows = m.size();
  if (rows == 0) return res;
  const std::size_t width = m.front().size();
  mpz_class prev = 1, tmp;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap(m[p], m[r]);
      res.sign = -res.sign;
    }
    const mpz_class& piv = m[r][c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      const mpz_class lead = m[i][c];
      for (std::size_t j = c + 1; j < width; ++j) {
        mpz_class& x = m[i][j];
        if (lead == 0) {
          if (x == 0) continue;
          x *= piv;
        } else {
          x *= piv;
          tmp = lead * m[r][j];
          x -= tmp;
        }
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = piv;
    res.pivots.push_back(c);
    ++r;
  }
  return res;
}

}  // namespace

RrefResult rref(const RatMatrix& a, bool want_transform) {
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t extra = want_transform ? rows : 0;
  IntRows m = integerize(a, extra);
  ForwardResult fwd = bareiss_forward(m, cols);
  const std::size_t rk = fwd.pivots.size();
  const std::size_t width = cols + extra;

  std::vector<RatVector> q(rows, RatVector(width));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < width; ++c)
      if (m[r][c] != 0) q[r][c] = Rational(m[r][c]);
  m.clear();

  for (std::size_t i = 0; i < rk; ++i) {
    const std::size_t pc = fwd.pivots[i];
    Rational inv = 1 / q[i][pc];
    for (std::size_t c = pc; c < width; ++c)
      if (q[i][c] != 0) q[i][c] *= inv;
  }
  for (std::size_t i = rk; i-- > 0;) {
    const std::size_t pc = fwd.pivots[i];
    for (std::size_t above = 0; above < i; ++above) {
      if (q[above][pc] == 0) continue;
      Rational f = q[above][pc];
      for (std::size_t c = pc; c < width; ++c)
        if (q[i][c] != 0) q[above][c] -= f * q[i][c];
    }
  }

  RrefResult out;
  out.pivots = std::move(fwd.pivots);
  out.reduced = RatMatrix(rows, cols);
  if (want_transform) out.transform = RatMatrix(rows, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) out.reduced(r, c) = std::move(q[r][c]);
    for (std::size_t c = 0; c < extra; ++c) out.transform(r, c) = std::move(q[r][cols + c]);
  }
  return out;
}

std::size_t rank(const RatMatrix& a) {
  IntRows m = integerize(a, 0);
  return bareiss_forward(m, a.cols()).pivots.size();
}

KernelBasis kernel_basis(const RatMatrix& a) {
  RrefResult rr = rref(a, false);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : rr.pivots) is_pivot[p] = true;
  KernelBasis kb;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    RatVector v(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.reduced(i, f);
    kb.vectors.push_back(std::move(v));
  }
  kb.dim = kb.vectors.size();
  return kb;
}

std::optional<RatVector> solve_membership(const RatMatrix& a, std::span<const Rational> b) {
  if (b.size() != a.rows())
    throw std::invalid_argument("right-hand side has length " + std::to_string(b.size()) +
                                ", expected " + std::to_string(a.rows()));
  RatMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  RrefResult rr = rref(aug, false);
  if (!rr.pivots.empty() && rr.pivots.back() == a.cols()) return std::nullopt;
  RatVector x(a.cols());
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.reduced(i, a.cols());
  return x;
}

Rational det_bareiss(const RatMatrix& a) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("determinant of non-square " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  std::vector<mpz_class> scales;
  IntRows m = integerize(a, 0, &scales);
  ForwardResult fwd = bareiss_forward(m, n);
  if (fwd.pivots.size() < n) return 0;
  mpz_class denom = 1;
  for (const auto& s : scales) denom *= s;
  Rational d(m[n - 1][n - 1] * fwd.sign, denom);
  d.canonicalize();
  return d;
}

RatVector primitive(RatVector v) {
  mpz_class l = 1, g = 0;
  for (const Rational& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  for (Rational& q : v) {
    q *= l;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
  }
  if (g == 0) return v;
  int sign = 1;
  for (const Rational& q : v)
    if (q != 0) {
      sign = sgn(q) < 0 ? -1 : 1;
      break;
    }
  for (Rational& q : v) q = Rational(q.get_num() / g) * sign;
  return v;
}

}  // namespace bisurf
