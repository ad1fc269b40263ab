#pragma once

// Fixtures, random generators and independent oracles shared by the tests.

#include "bisurf/implicitize.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bisurf::testing {

/// The worked example with one simple base point at (0:1;0:1).
inline Parametrization worked_example() {
  return Parametrization(2, 2,
                         {parse("u^2*t*v + s^2*t*v"), parse("u^2*t^2 + s*u*v^2"),
                          parse("s^2*v^2 + s^2*t^2"), parse("s^2*t*v")});
}

/// Bidegree (2,3) ideal whose base scheme has degree 2 at (0:1;0:1).
inline std::vector<BihomPoly> regularity_example() {
  return {parse("u^2*t^2*v"), parse("u^2*t^3 + s*u*v^3"), parse("s^2*t*v^2"),
          parse("s^2*v^3 + s^2*t^3")};
}

inline Parametrization segre() {
  return Parametrization(1, 1, {parse("s*t"), parse("s*v"), parse("u*t"), parse("u*v")});
}

inline Rational random_rational(std::mt19937_64& rng, int bound, int max_den = 1) {
  long num = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * bound + 1)) - bound;
  long den = static_cast<long>(rng() % static_cast<std::uint64_t>(max_den)) + 1;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline BihomPoly random_poly(BiDegree d, std::mt19937_64& rng, int bound = 5,
                             const std::vector<BiMonomial>& forced_zero = {}) {
  BihomPoly::Terms terms;
  for (const BiMonomial& mono : monomial_basis(d)) {
    bool skip = false;
    for (const BiMonomial& z : forced_zero) skip = skip || z == mono;
    if (skip) continue;
    Rational c = random_rational(rng, bound);
    if (c != 0) terms.emplace(mono, c);
  }
  return BihomPoly(d, std::move(terms));
}

/// Random phi of bidegree (m,n). Monomials in `forced_zero` are absent from
/// every a_i: u^m v^n plants a base point at (0:1;0:1), s^m t^n one at (1:0;1:0).
inline Parametrization random_phi(int m, int n, std::mt19937_64& rng,
                                  const std::vector<BiMonomial>& forced_zero = {}, int bound = 5) {
  std::array<BihomPoly, 4> a;
  for (auto& p : a) p = random_poly({m, n}, rng, bound, forced_zero);
  return Parametrization(m, n, std::move(a));
}

inline BiMonomial corner_u_v(int m, int n) { return {0, m, 0, n}; }
inline BiMonomial corner_s_t(int m, int n) { return {m, 0, n, 0}; }

inline RatMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                               int bound = 5, int max_den = 3) {
  RatMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = random_rational(rng, bound, max_den);
  return a;
}

/// Product of random rows x rank and rank x cols factors.
inline RatMatrix random_rank_matrix(std::size_t rows, std::size_t cols, std::size_t rank,
                                    std::mt19937_64& rng) {
  return random_matrix(rows, rank, rng, 4, 1) * random_matrix(rank, cols, rng, 4, 1);
}

/// Laplace expansion along the first row.
inline Rational det_by_cofactors(const RatMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Rational acc = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c) == 0) continue;
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) minor(r - 1, k++) = a(r, cc);
    Rational term = a(0, c) * det_by_cofactors(minor);
    acc += (c % 2 == 0) ? term : Rational(-term);
  }
  return acc;
}

/// Largest r with a nonzero r x r minor, by enumeration (small matrices only).
inline std::size_t rank_by_minors(const RatMatrix& a) {
  const std::size_t maxr = std::min(a.rows(), a.cols());
  for (std::size_t r = maxr; r > 0; --r) {
    std::vector<bool> rsel(a.rows(), false), csel(a.cols(), false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<long>(r), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<long>(r), true);
      do {
        RatMatrix sub(r, r);
        for (std::size_t i = 0, ri = 0; i < a.rows(); ++i) {
          if (!rsel[i]) continue;
          for (std::size_t j = 0, cj = 0; j < a.cols(); ++j)
            if (csel[j]) sub(ri, cj++) = a(i, j);
          ++ri;
        }
        if (det_by_cofactors(sub) != 0) return r;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Golden polynomial files: '#' comment lines, then one polynomial.
inline XPoly read_golden(const std::string& name) {
  std::istringstream in(read_text(std::string(BISURF_TEST_DATA) + "/" + name));
  std::string line, body;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') body += line + " ";
  return parse_x(body);
}

/// True if p == c*q for some nonzero rational c.
inline bool proportional(const XPoly& p, const XPoly& q) {
  if (p.is_zero() || q.is_zero()) return p.is_zero() && q.is_zero();
  return normalize(p) == normalize(q);
}

}  // namespace bisurf::testing
