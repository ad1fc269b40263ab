#include "doctest.h"
#include "support.hpp"

using namespace bisurf;
using namespace bisurf::testing;

namespace {

// sum_w A_w(p) * w(a(p)) evaluated pointwise, without polynomial products.
Rational evaluate_following(const MovingSurface& s, const Parametrization& phi, const Point4& p) {
  std::array<Rational, 4> ap;
  for (std::size_t i = 0; i < 4; ++i) ap[i] = evaluate(phi[i], p);
  Rational acc = 0;
  for (const auto& [w, a] : s.coeffs) {
    Rational term = evaluate(a, p);
    for (std::size_t i = 0; i < 4; ++i)
      for (int e = 0; e < w.e[i]; ++e) term *= ap[i];
    acc += term;
  }
  return acc;
}

Point4 random_point(std::mt19937_64& rng) {
  return {random_rational(rng, 20, 7), random_rational(rng, 20, 7), random_rational(rng, 20, 7),
          random_rational(rng, 20, 7)};
}

MovingSurface times_x(const MovingSurface& plane, int j) {
  MovingSurface q;
  q.xdegree = 2;
  BiDegree d = plane.coeffs.begin()->second.bidegree();
  for (const XMonomial& w : x_monomials(2)) q.coeffs.emplace(w, BihomPoly(d));
  for (const auto& [w, a] : plane.coeffs) q.coeffs.at(w * XMonomial::var(j)) += a;
  return q;
}

// The reference moving plane of the worked example, homogenized:
// -uv x2 + ut x3 + sv x1 + st (x3 - x0).
MovingSurface reference_plane() {
  MovingSurface p;
  p.xdegree = 1;
  p.coeffs.emplace(XMonomial::var(0), parse("-s*t"));
  p.coeffs.emplace(XMonomial::var(1), parse("s*v"));
  p.coeffs.emplace(XMonomial::var(2), parse("-u*v"));
  p.coeffs.emplace(XMonomial::var(3), parse("u*t + s*t"));
  return p;
}

Parametrization random_instance(std::mt19937_64& rng) {
  int m = 1 + static_cast<int>(rng() % 2), n = 1 + static_cast<int>(rng() % 2);
  std::vector<BiMonomial> zero;
  if (rng() % 2) zero.push_back(corner_u_v(m, n));
  if (rng() % 3 == 0) zero.push_back(corner_s_t(m, n));
  return random_phi(m, n, rng, zero);
}

}  // namespace

TEST_CASE("Parametrization validation") {
  CHECK_THROWS_AS(Parametrization(2, 2, {parse("s*t"), parse("s*v"), parse("u*t"), parse("u*v")}),
                  BidegreeError);
  CHECK_THROWS_AS(Parametrization(0, 1, {parse("t", BiDegree{0, 1}), parse("v", BiDegree{0, 1}),
                                         parse("t", BiDegree{0, 1}), parse("v", BiDegree{0, 1})}),
                  BidegreeError);
  Parametrization phi = worked_example();
  CHECK(phi.mn() == 4);
  CHECK(phi.syzygy_bidegree() == BiDegree{1, 1});
  auto sq = phi.squared_generators();
  REQUIRE(sq.size() == 10);
  CHECK(sq[0] == phi[0] * phi[0]);
  CHECK(sq[3] == phi[0] * phi[3]);
  CHECK(sq[4] == phi[1] * phi[1]);
  CHECK(sq[9] == phi[3] * phi[3]);
}

TEST_CASE("multiplication matrix shapes") {
  std::mt19937_64 rng(17);
  for (auto [m, n] : {std::pair{1, 1}, {2, 1}, {2, 2}, {1, 3}}) {
    Parametrization phi = random_phi(m, n, rng);
    std::size_t mn = phi.mn();
    CHECK(mp_matrix(phi).rows() == 4 * mn);
    CHECK(mp_matrix(phi).cols() == 4 * mn);
    CHECK(mc_matrix(phi).rows() == 4 * mn);
    CHECK(mc_matrix(phi).cols() == 3 * mn);
    CHECK(mq_matrix(phi).rows() == 9 * mn);
    CHECK(mq_matrix(phi).cols() == 10 * mn);
  }
  CHECK_THROWS_AS(build_mult_matrix({parse("s^2*t")}, BiDegree{1, 1}), BidegreeError);
}

TEST_CASE("MP applied to a vector equals polynomial arithmetic") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Parametrization phi = random_phi(2, 1 + trial % 2, rng);
    BiDegree d = phi.syzygy_bidegree();
    MovingSurface s;
    s.xdegree = 1;
    BihomPoly expected(d + phi.bidegree());
    for (int i = 0; i < 4; ++i) {
      BihomPoly a = random_poly(d, rng);
      s.coeffs.emplace(XMonomial::var(i), a);
      expected += a * phi[static_cast<std::size_t>(i)];
    }
    RatVector image = mp_matrix(phi) * s.to_vector();
    CHECK(image == coeff_vector(expected, monomial_basis(expected.bidegree())));
    CHECK(substitute(s, phi) == expected);
    CHECK(surface_from_vector(s.to_vector(), 1, d) == s);
  }
  CHECK_THROWS_AS(surface_from_vector(RatVector(5), 1, {1, 1}), BidegreeError);
}

TEST_CASE("worked example: syzygy dimensions and the moving plane") {
  Parametrization phi = worked_example();
  SyzygyBasis planes = moving_planes(phi);
  REQUIRE(planes.dim() == 1);
  CHECK(moving_quadrics(phi).dim() == 7);
  CHECK(syz_dim_abc(phi) == 0);

  MovingSurface reference = reference_plane();
  CHECK(follows(reference, phi));
  RatVector got = primitive(planes.elements[0].to_vector());
  RatVector want = primitive(reference.to_vector());
  bool same = got == want;
  if (!same) {
    for (auto& q : want) q = -q;
    same = got == want;
  }
  CHECK(same);
}

TEST_CASE("Segre has no moving planes and one moving quadric") {
  Parametrization phi = segre();
  CHECK(moving_planes(phi).dim() == 0);
  SyzygyBasis q = moving_quadrics(phi);
  REQUIRE(q.dim() == 1);
  const MovingSurface& s = q.elements[0];
  Rational c03 = s.coeff(XMonomial::product(0, 3)).coefficient({});
  Rational c12 = s.coeff(XMonomial::product(1, 2)).coefficient({});
  CHECK(c03 != 0);
  CHECK(c12 == -c03);
}

TEST_CASE("syzygy identity, rank-nullity and x_j P_i on random instances") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    Parametrization phi = random_instance(rng);
    const std::size_t mn = phi.mn();
    SyzygyBasis planes = moving_planes(phi);
    SyzygyBasis quadrics = moving_quadrics(phi);

    CHECK(planes.dim() + rank(mp_matrix(phi)) == 4 * mn);
    CHECK(quadrics.dim() + rank(mq_matrix(phi)) == 10 * mn);
    CHECK(syz_dim_abc(phi) + rank(mc_matrix(phi)) == 3 * mn);
    CHECK(quadrics.dim() >= mn);

    for (const SyzygyBasis* b : {&planes, &quadrics})
      for (const MovingSurface& s : b->elements) {
        CHECK(follows(s, phi));
        for (int k = 0; k < 3; ++k) CHECK(evaluate_following(s, phi, random_point(rng)) == 0);
      }

    if (planes.dim() == 0) continue;
    RatMatrix span(10 * mn, quadrics.dim());
    for (std::size_t c = 0; c < quadrics.dim(); ++c) {
      RatVector v = quadrics.elements[c].to_vector();
      for (std::size_t r = 0; r < v.size(); ++r) span(r, c) = v[r];
    }
    for (const MovingSurface& p : planes.elements)
      for (int j = 0; j < 4; ++j) CHECK(solve_membership(span, times_x(p, j).to_vector()));
  }
}
