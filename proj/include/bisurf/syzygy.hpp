#pragma once

// Moving planes and moving quadrics of bidegree (m-1, n-1) as kernels of the
// multiplication maps MP, MC and MQ.

#include "bisurf/linalg.hpp"
#include "bisurf/ring.hpp"

#include <array>
#include <map>
#include <utility>
#include <vector>

namespace bisurf {

/// phi = [a0, a1, a2, a3], each bihomogeneous of bidegree (m, n).
class Parametrization {
 public:
  /// Throws BidegreeError unless m, n >= 1 and every a_i has bidegree (m, n).
  Parametrization(int m, int n, std::array<BihomPoly, 4> a);

  int m() const { return m_; }
  int n() const { return n_; }
  BiDegree bidegree() const { return {m_, n_}; }
  /// (m-1, n-1)
  BiDegree syzygy_bidegree() const { return {m_ - 1, n_ - 1}; }
  std::size_t mn() const { return static_cast<std::size_t>(m_ * n_); }
  const std::array<BihomPoly, 4>& a() const { return a_; }
  const BihomPoly& operator[](std::size_t i) const { return a_[i]; }

  std::vector<BihomPoly> generators() const { return {a_.begin(), a_.end()}; }
  /// a_i a_j for i <= j, ordered a0^2, a0a1, a0a2, a0a3, a1^2, ..., a3^2.
  std::vector<BihomPoly> squared_generators() const;

  friend bool operator==(const Parametrization&, const Parametrization&) = default;

 private:
  int m_, n_;
  std::array<BihomPoly, 4> a_;
};

/// Index pairs (i, j), i <= j, in the column-block order of MQ.
const std::array<std::pair<int, int>, 10>& quadric_pairs();

/// sum_w A_w * w with each A_w of bidegree (m-1, n-1); w ranges over x-monomials
/// of degree 1 (moving plane) or 2 (moving quadric).
struct MovingSurface {
  int xdegree = 1;
  std::map<XMonomial, BihomPoly, XMonomialDescending> coeffs;

  const BihomPoly& coeff(const XMonomial& w) const { return coeffs.at(w); }
  /// Entry of M: the XPoly collecting the coefficient of `mono` in every A_w.
  XPoly x_coefficient(const BiMonomial& mono) const;
  /// Coordinates in the column order of MP or MQ.
  RatVector to_vector() const;

  friend bool operator==(const MovingSurface&, const MovingSurface&) = default;
};

/// Substitutes x_i -> a_i. The surface follows phi iff this is zero.
BihomPoly substitute(const MovingSurface& surface, const Parametrization& phi);
bool follows(const MovingSurface& surface, const Parametrization& phi);

/// Interprets a vector in MP (xdegree 1) or MQ (xdegree 2) column order.
MovingSurface surface_from_vector(std::span<const Rational> v, int xdegree, BiDegree coeff_degree);

struct SyzygyBasis {
  std::vector<MovingSurface> elements;
  /// Pivot monomials (alpha_i, beta_i) for an echelon plane basis; empty otherwise.
  std::vector<BiMonomial> pivot_set;

  std::size_t dim() const { return elements.size(); }
};

/// Matrix of (A_g)_g -> sum_g A_g * g into R_target. Column blocks follow the
/// generator order, each block in canonical monomial order of R_{target - deg g}.
/// Throws BidegreeError if some generator exceeds the target.
RatMatrix build_mult_matrix(const std::vector<BihomPoly>& generators, BiDegree target);

RatMatrix mp_matrix(const Parametrization& phi);
RatMatrix mc_matrix(const Parametrization& phi);
RatMatrix mq_matrix(const Parametrization& phi);

/// Kernel of MP as moving planes, primitive integer coordinates.
SyzygyBasis moving_planes(const Parametrization& phi);
/// Kernel of MQ as moving quadrics, primitive integer coordinates.
SyzygyBasis moving_quadrics(const Parametrization& phi);
/// dim Syz(a0, a1, a2)_{m-1,n-1} = kernel dimension of MC.
std::size_t syz_dim_abc(const Parametrization& phi);

}  // namespace bisurf
