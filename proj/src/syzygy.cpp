#include "bisurf/syzygy.hpp"

#include <string>

namespace bisurf {

Parametrization::Parametrization(int m, int n, std::array<BihomPoly, 4> a)
    : m_(m), n_(n), a_(std::move(a)) {
  if (m < 1 || n < 1)
    throw BidegreeError("bidegree (" + std::to_string(m) + "," + std::to_string(n) +
                        ") must be at least (1,1)");
  for (std::size_t i = 0; i < 4; ++i)
    if (!(a_[i].bidegree() == BiDegree{m, n}))
      throw BidegreeError("a" + std::to_string(i) + " has bidegree " + a_[i].bidegree().str() +
                          ", expected " + BiDegree{m, n}.str());
}

const std::array<std::pair<int, int>, 10>& quadric_pairs() {
  static const std::array<std::pair<int, int>, 10> pairs = [] {
    std::array<std::pair<int, int>, 10> p{};
    std::size_t k = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) p[k++] = {i, j};
    return p;
  }();
  return pairs;
}

std::vector<BihomPoly> Parametrization::squared_generators() const {
  std::vector<BihomPoly> out;
  out.reserve(10);
  for (auto [i, j] : quadric_pairs()) out.push_back(a_[i] * a_[j]);
  return out;
}

namespace {

std::vector<XMonomial> surface_columns(int xdegree) {
  if (xdegree == 1) return x_monomials(1);
  std::vector<XMonomial> out;
  for (auto [i, j] : quadric_pairs()) out.push_back(XMonomial::product(i, j));
  return out;
}

}  // namespace

XPoly MovingSurface::x_coefficient(const BiMonomial& mono) const {
  XPoly p;
  for (const auto& [w, a] : coeffs) p.add_term(w, a.coefficient(mono));
  return p;
}

RatVector MovingSurface::to_vector() const {
  RatVector out;
  for (const XMonomial& w : surface_columns(xdegree)) {
    const BihomPoly& a = coeffs.at(w);
    RatVector block = coeff_vector(a, monomial_basis(a.bidegree()));
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

MovingSurface surface_from_vector(std::span<const Rational> v, int xdegree, BiDegree coeff_degree) {
  auto cols = surface_columns(xdegree);
  const std::size_t block = coeff_degree.dim();
  if (v.size() != cols.size() * block)
    throw BidegreeError("vector length " + std::to_string(v.size()) + " does not fit " +
                        std::to_string(cols.size()) + " blocks of R" + coeff_degree.str());
  MovingSurface s;
  s.xdegree = xdegree;
  for (std::size_t b = 0; b < cols.size(); ++b)
    s.coeffs.emplace(cols[b], from_coeff_vector(v.subspan(b * block, block), coeff_degree));
  return s;
}

BihomPoly substitute(const MovingSurface& surface, const Parametrization& phi) {
  BiDegree target = surface.coeffs.begin()->second.bidegree() +
                    BiDegree{phi.m() * surface.xdegree, phi.n() * surface.xdegree};
  BihomPoly acc(target);
  for (const auto& [w, a] : surface.coeffs) {
    BihomPoly prod = a;
    for (std::size_t i = 0; i < 4; ++i)
      for (int e = 0; e < w.e[i]; ++e) prod = prod * phi[i];
    acc += prod;
  }
  return acc;
}

bool follows(const MovingSurface& surface, const Parametrization& phi) {
  return substitute(surface, phi).is_zero();
}

RatMatrix build_mult_matrix(const std::vector<BihomPoly>& generators, BiDegree target) {
  std::size_t ncols = 0;
  for (const BihomPoly& g : generators) {
    BiDegree shift = target - g.bidegree();
    if (!shift.nonnegative())
      throw BidegreeError("generator of bidegree " + g.bidegree().str() + " exceeds target " +
                          target.str());
    ncols += shift.dim();
  }
  RatMatrix mat(target.dim(), ncols);
  std::size_t col = 0;
  for (const BihomPoly& g : generators) {
    for (const BiMonomial& mu : monomial_basis(target - g.bidegree())) {
      for (const auto& [mono, c] : g.terms()) mat(basis_index(mu * mono), col) = c;
      ++col;
    }
  }
  return mat;
}

RatMatrix mp_matrix(const Parametrization& phi) {
  return build_mult_matrix(phi.generators(), {2 * phi.m() - 1, 2 * phi.n() - 1});
}

RatMatrix mc_matrix(const Parametrization& phi) {
  return build_mult_matrix({phi[0], phi[1], phi[2]}, {2 * phi.m() - 1, 2 * phi.n() - 1});
}

RatMatrix mq_matrix(const Parametrization& phi) {
  return build_mult_matrix(phi.squared_generators(), {3 * phi.m() - 1, 3 * phi.n() - 1});
}

namespace {

SyzygyBasis kernel_surfaces(const RatMatrix& mat, int xdegree, BiDegree coeff_degree) {
  SyzygyBasis basis;
  for (RatVector& v : kernel_basis(mat).vectors)
    basis.elements.push_back(surface_from_vector(primitive(std::move(v)), xdegree, coeff_degree));
  return basis;
}

}  // namespace

SyzygyBasis moving_planes(const Parametrization& phi) {
  return kernel_surfaces(mp_matrix(phi), 1, phi.syzygy_bidegree());
}

SyzygyBasis moving_quadrics(const Parametrization& phi) {
  return kernel_surfaces(mq_matrix(phi), 2, phi.syzygy_bidegree());
}

std::size_t syz_dim_abc(const Parametrization& phi) {
  RatMatrix mc = mc_matrix(phi);
  return mc.cols() - rank(mc);
}

}  // namespace bisurf
