#include "bisurf/implicitize.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace bisurf {

namespace {

const XMonomial kX3 = XMonomial::var(3);
const XMonomial kX3Squared = XMonomial::product(3, 3);

std::size_t pair_block(int i, int j) {
  const auto& pairs = quadric_pairs();
  for (std::size_t b = 0; b < pairs.size(); ++b)
    if (pairs[b] == std::pair<int, int>{i, j}) return b;
  throw std::logic_error("not an x-quadric pair");
}

std::pair<int, int> pair_of(const XMonomial& w) {
  int idx[2], n = 0;
  for (int i = 0; i < 4; ++i)
    for (int e = 0; e < w.e[static_cast<std::size_t>(i)]; ++e) idx[n++] = i;
  return {idx[0], idx[1]};
}

}  // namespace

SyzygyBasis echelon_plane_basis(const SyzygyBasis& planes) {
  SyzygyBasis out;
  const std::size_t k = planes.dim();
  if (k == 0) return out;

  const BiDegree deg = planes.elements.front().coeff(kX3).bidegree();
  const auto basis = monomial_basis(deg);
  std::vector<RatVector> x3_block, full;
  for (const MovingSurface& p : planes.elements) {
    x3_block.push_back(coeff_vector(p.coeff(kX3), basis));
    full.push_back(p.to_vector());
  }
  RrefResult rr = rref(RatMatrix::from_rows(x3_block));
  if (rr.pivots.size() < k)
    throw ConstructionError("x3 block of the moving planes has rank " +
                            std::to_string(rr.pivots.size()) + " < k = " + std::to_string(k) +
                            "; Syz(a0,a1,a2) is not zero");
  RatMatrix reduced = rr.transform * RatMatrix::from_rows(full);
  for (std::size_t i = 0; i < k; ++i) {
    out.elements.push_back(surface_from_vector(reduced.row(i), 1, deg));
    out.pivot_set.push_back(basis[rr.pivots[i]]);
  }
  return out;
}

ColumnIndexSet column_index_set(const Parametrization& phi, const std::vector<BiMonomial>& pivots) {
  const auto basis = monomial_basis(phi.syzygy_bidegree());
  ColumnIndexSet cols;
  for (const BiMonomial& mono : basis) cols.lambda_p.emplace_back(mono, kX3Squared);
  for (const BiMonomial& p : pivots)
    for (int j = 0; j < 3; ++j) cols.lambda_p.emplace_back(p, XMonomial::product(j, 3));

  for (auto [i, j] : quadric_pairs()) {
    XMonomial w = XMonomial::product(i, j);
    for (const BiMonomial& mono : basis) {
      bool in_p = std::find(cols.lambda_p.begin(), cols.lambda_p.end(),
                            std::pair<BiMonomial, XMonomial>{mono, w}) != cols.lambda_p.end();
      if (!in_p) cols.lambda_prime.emplace_back(mono, w);
    }
  }
  return cols;
}

const MovingSurface& QuadricBasis::preimage(const BiMonomial& mono, const XMonomial& w) const {
  for (std::size_t i = 0; i < columns.lambda_p.size(); ++i)
    if (columns.lambda_p[i].first == mono && columns.lambda_p[i].second == w) return elements[i];
  throw std::out_of_range("column " + mono.str() + "*" + w.str() + " is not in Lambda_P");
}

QuadricBasis quadric_basis_via_projection(const Parametrization& phi,
                                          const std::vector<BiMonomial>& pivots) {
  QuadricBasis qb;
  qb.columns = column_index_set(phi, pivots);
  const std::size_t mn = phi.mn();
  const std::size_t expected = qb.columns.lambda_p.size();

  KernelBasis kb = kernel_basis(mq_matrix(phi));
  if (kb.dim != expected)
    throw ConstructionError("dim Syz(I^2) = " + std::to_string(kb.dim) + ", expected mn + 3k = " +
                            std::to_string(expected));

  auto column_of = [&](const std::pair<BiMonomial, XMonomial>& label) {
    auto [i, j] = pair_of(label.second);
    return pair_block(i, j) * mn + basis_index(label.first);
  };
  std::vector<std::size_t> order;
  for (const auto& label : qb.columns.lambda_p) order.push_back(column_of(label));
  for (const auto& label : qb.columns.lambda_prime) order.push_back(column_of(label));

  RatMatrix permuted = RatMatrix::from_rows(kb.vectors).select_columns(order);
  RrefResult rr = rref(permuted, false);
  for (std::size_t i = 0; i < expected; ++i)
    if (rr.pivots.size() != expected || rr.pivots[i] != i)
      throw ConstructionError(
          "moving quadrics do not project isomorphically onto Lambda_P: some syzygy of I^2 "
          "lives in Lambda'");

  for (std::size_t r = 0; r < expected; ++r) {
    RatVector v(10 * mn);
    for (std::size_t c = 0; c < order.size(); ++c) v[order[c]] = rr.reduced(r, c);
    qb.elements.push_back(surface_from_vector(v, 2, phi.syzygy_bidegree()));
  }
  return qb;
}

MMatrix assemble_M(const SyzygyBasis& planes, const QuadricBasis& quadrics) {
  if (quadrics.elements.empty()) throw ConstructionError("no moving quadrics");
  const BiDegree deg = quadrics.elements.front().coeffs.begin()->second.bidegree();
  const auto basis = monomial_basis(deg);
  const std::size_t mn = basis.size();
  const std::size_t k = planes.dim();
  if (planes.pivot_set.size() != k)
    throw ConstructionError("moving planes are not in echelon form");
  if (quadrics.elements.size() != mn + 3 * k)
    throw ConstructionError("shape mismatch: " + std::to_string(quadrics.elements.size()) +
                            " quadrics for mn = " + std::to_string(mn) + ", k = " +
                            std::to_string(k));

  MMatrix M;
  M.size = mn;
  M.linear_rows = k;
  M.column_monomials = planes.pivot_set;
  for (const BiMonomial& mono : basis)
    if (std::find(planes.pivot_set.begin(), planes.pivot_set.end(), mono) ==
        planes.pivot_set.end())
      M.column_monomials.push_back(mono);

  std::vector<const MovingSurface*> rows;
  for (std::size_t i = 0; i < k; ++i) {
    rows.push_back(&planes.elements[i]);
    M.row_labels.push_back("P" + std::to_string(i + 1));
  }
  for (std::size_t c = k; c < mn; ++c) {
    const BiMonomial& mono = M.column_monomials[c];
    rows.push_back(&quadrics.preimage(mono, kX3Squared));
    M.row_labels.push_back("Q[" + (mono.str().empty() ? std::string("1") : mono.str()) + "]");
  }
  M.entries.reserve(mn * mn);
  for (const MovingSurface* row : rows)
    for (const BiMonomial& mono : M.column_monomials) M.entries.push_back(row->x_coefficient(mono));
  return M;
}

MMatrix assemble_M_cox(const SyzygyBasis& quadrics, BiDegree coeff_degree) {
  const auto basis = monomial_basis(coeff_degree);
  if (quadrics.dim() != basis.size())
    throw ConstructionError("shape mismatch: " + std::to_string(quadrics.dim()) +
                            " moving quadrics, expected mn = " + std::to_string(basis.size()));
  MMatrix M;
  M.size = basis.size();
  M.column_monomials = basis;
  for (std::size_t r = 0; r < quadrics.dim(); ++r) {
    M.row_labels.push_back("Q" + std::to_string(r + 1));
    for (const BiMonomial& mono : basis)
      M.entries.push_back(quadrics.elements[r].x_coefficient(mono));
  }
  return M;
}

const char* to_string(DetBackend b) {
  switch (b) {
    case DetBackend::cofactor: return "cofactor";
    case DetBackend::interpolation: return "interp";
    case DetBackend::both: return "both";
    case DetBackend::automatic: return "auto";
  }
  return "?";
}

DetBackend parse_backend(const std::string& name) {
  if (name == "cofactor") return DetBackend::cofactor;
  if (name == "interp" || name == "interpolation") return DetBackend::interpolation;
  if (name == "both") return DetBackend::both;
  if (name == "auto") return DetBackend::automatic;
  throw std::invalid_argument("unknown determinant backend '" + name + "'");
}

namespace {

// M with every row multiplied by the lcm of its denominators.
struct IntegerRows {
  std::vector<std::vector<std::pair<XMonomial, mpz_class>>> terms;  // row-major entries
  mpz_class scale = 1;                                              // product of row factors
  int max_degree = 0;
};

IntegerRows integer_rows(const MMatrix& m) {
  const std::size_t n = m.size;
  IntegerRows out;
  out.terms.resize(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < n; ++c)
      for (const auto& [w, q] : m(r, c).terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    out.scale *= l;
    for (std::size_t c = 0; c < n; ++c)
      for (const auto& [w, q] : m(r, c).terms()) {
        out.terms[r * n + c].push_back({w, mpz_class(q.get_num() * (l / q.get_den()))});
        out.max_degree = std::max(out.max_degree, w.degree());
      }
  }
  return out;
}

// Exponents packed 16 bits each, so monomial products are integer sums.
using PackedPoly = std::vector<std::pair<std::uint64_t, mpz_class>>;

std::uint64_t pack(const XMonomial& w) {
  std::uint64_t k = 0;
  for (int e : w.e) k = (k << 16) | static_cast<std::uint64_t>(e);
  return k;
}

XMonomial unpack(std::uint64_t k) {
  XMonomial w;
  for (std::size_t i = 4; i-- > 0;) {
    w.e[i] = static_cast<int>(k & 0xffff);
    k >>= 16;
  }
  return w;
}

}  // namespace

XPoly det_cofactor(const MMatrix& m) {
  const std::size_t n = m.size;
  if (n == 0) return XPoly::constant(1);
  if (n > 30) throw std::invalid_argument("cofactor expansion limited to 30x30");
  const IntegerRows rows = integer_rows(m);
  std::vector<PackedPoly> entries(n * n);
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (const auto& [w, c] : rows.terms[i]) entries[i].push_back({pack(w), c});

  std::unordered_map<std::uint32_t, PackedPoly> memo;
  const PackedPoly one{{0, mpz_class(1)}};

  // Minor on rows n - popcount(cols) .. n-1 and the columns in `cols`.
  auto minor = [&](auto&& self, std::uint32_t cols) -> const PackedPoly& {
    if (cols == 0) return one;
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    const std::size_t row = n - static_cast<std::size_t>(__builtin_popcount(cols));
    std::unordered_map<std::uint64_t, mpz_class> acc;
    bool negate = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cols & (1u << c))) continue;
      const PackedPoly& entry = entries[row * n + c];
      if (!entry.empty()) {
        const PackedPoly& sub = self(self, cols & ~(1u << c));
        for (const auto& [ka, ca] : entry)
          for (const auto& [kb, cb] : sub) {
            mpz_class& slot = acc[ka + kb];
            if (negate)
              mpz_submul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
            else
              mpz_addmul(slot.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
          }
      }
      negate = !negate;
    }
    PackedPoly out;
    out.reserve(acc.size());
    for (auto& [k, c] : acc)
      if (c != 0) out.push_back({k, std::move(c)});
    return memo.emplace(cols, std::move(out)).first->second;
  };
  const std::uint32_t all = n == 32 ? ~0u : ((1u << n) - 1);
  XPoly det;
  for (const auto& [k, c] : minor(minor, all)) {
    Rational q(c, rows.scale);
    q.canonicalize();
    det.add_term(unpack(k), q);
  }
  return det;
}

namespace {

Rational det_at(const MMatrix& m, const Point4& x) {
  RatMatrix a(m.size, m.size);
  for (std::size_t r = 0; r < m.size; ++r)
    for (std::size_t c = 0; c < m.size; ++c) a(r, c) = evaluate(m(r, c), x);
  return det_bareiss(a);
}

// Integer-scaled M evaluated at x0 = 1 and integer x1, x2, x3.
class IntegerImage {
 public:
  explicit IntegerImage(const MMatrix& m) : n_(m.size) {
    IntegerRows rows = integer_rows(m);
    terms_ = std::move(rows.terms);
    scale_ = rows.scale;
    max_degree_ = rows.max_degree;
  }

  Rational det(long x1, long x2, long x3) const {
    std::array<std::vector<mpz_class>, 3> pw;
    const long xs[3] = {x1, x2, x3};
    for (std::size_t v = 0; v < 3; ++v) {
      pw[v].assign(static_cast<std::size_t>(max_degree_) + 1, 1);
      for (std::size_t e = 1; e < pw[v].size(); ++e) pw[v][e] = pw[v][e - 1] * xs[v];
    }
    std::vector<mpz_class> a(n_ * n_);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (const auto& [w, c] : terms_[i]) {
        const auto e = [&](std::size_t v) { return static_cast<std::size_t>(w.e[v + 1]); };
        a[i] += c * pw[0][e(0)] * pw[1][e(1)] * pw[2][e(2)];
      }
    Rational d(bareiss(a), scale_);
    d.canonicalize();
    return d;
  }

 private:
  mpz_class bareiss(std::vector<mpz_class>& a) const {
    auto at = [&](std::size_t r, std::size_t c) -> mpz_class& { return a[r * n_ + c]; };
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      while (p < n_ && at(p, k) == 0) ++p;
      if (p == n_) return 0;
      if (p != k) {
        for (std::size_t c = 0; c < n_; ++c) std::swap(at(p, c), at(k, c));
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n_; ++i) {
        for (std::size_t j = k + 1; j < n_; ++j) {
          at(i, j) = at(i, j) * at(k, k) - at(i, k) * at(k, j);
          mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
        }
      }
      prev = at(k, k);
    }
    return sign > 0 ? prev : mpz_class(-prev);
  }

  std::size_t n_;
  mpz_class scale_;
  int max_degree_ = 0;
  std::vector<std::vector<std::pair<XMonomial, mpz_class>>> terms_;
};

// Nodes (i1, i2, i3) with i1 + i2 + i3 <= bound.
class Simplex {
 public:
  explicit Simplex(std::size_t bound) : bound_(bound), offsets_((bound + 1) * (bound + 1)) {
    std::size_t next = 0;
    for (std::size_t i1 = 0; i1 <= bound; ++i1)
      for (std::size_t i2 = 0; i1 + i2 <= bound; ++i2) {
        offsets_[i1 * (bound + 1) + i2] = next;
        next += bound - i1 - i2 + 1;
      }
    size_ = next;
  }
  std::size_t size() const { return size_; }
  std::size_t bound() const { return bound_; }
  std::size_t operator()(std::size_t i1, std::size_t i2, std::size_t i3) const {
    return offsets_[i1 * (bound_ + 1) + i2] + i3;
  }

 private:
  std::size_t bound_, size_ = 0;
  std::vector<std::size_t> offsets_;
};

// Along one axis of the simplex, apply `f` to every maximal line of nodes.
template <typename F>
void for_each_line(const Simplex& s, int axis, RatVector& values, F f) {
  const std::size_t b = s.bound();
  RatVector line;
  for (std::size_t p = 0; p <= b; ++p)
    for (std::size_t q = 0; p + q <= b; ++q) {
      const std::size_t len = b - p - q + 1;
      auto index = [&](std::size_t i) {
        return axis == 1 ? s(i, p, q) : axis == 2 ? s(p, i, q) : s(p, q, i);
      };
      line.resize(len);
      for (std::size_t i = 0; i < len; ++i) line[i] = values[index(i)];
      f(line);
      for (std::size_t i = 0; i < len; ++i) values[index(i)] = line[i];
    }
}

// Values at x = 0, 1, ... become Newton coefficients for x(x-1)...(x-i+1).
void divided_differences(RatVector& v) {
  for (std::size_t level = 1; level < v.size(); ++level)
    for (std::size_t i = v.size() - 1; i >= level; --i)
      v[i] = (v[i] - v[i - 1]) / Rational(static_cast<long>(level));
}

void newton_to_monomial(RatVector& v) {
  const std::size_t n = v.size();
  RatVector poly{v[n - 1]};
  for (std::size_t k = n - 1; k-- > 0;) {
    RatVector next(poly.size() + 1);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= poly[i] * Rational(static_cast<long>(k));
    }
    next[0] += v[k];
    poly = std::move(next);
  }
  poly.resize(n);
  v = std::move(poly);
}

}  // namespace

XPoly det_interpolation(const MMatrix& m, int degree) {
  if (degree < 0) throw std::invalid_argument("negative degree");
  // One degree of slack exposes a determinant of degree exactly degree + 1.
  const Simplex simplex(static_cast<std::size_t>(degree) + 1);
  const IntegerImage image(m);

  RatVector values(simplex.size());
  const std::size_t b = simplex.bound();
  for (std::size_t i1 = 0; i1 <= b; ++i1)
    for (std::size_t i2 = 0; i1 + i2 <= b; ++i2)
      for (std::size_t i3 = 0; i1 + i2 + i3 <= b; ++i3)
        values[simplex(i1, i2, i3)] = image.det(static_cast<long>(i1), static_cast<long>(i2),
                                                static_cast<long>(i3));

  // The nodes form a lower set, so tensor Newton interpolation applies with
  // lines shortening toward the far face.
  for (int axis = 1; axis <= 3; ++axis) for_each_line(simplex, axis, values, divided_differences);
  for (int axis = 1; axis <= 3; ++axis) for_each_line(simplex, axis, values, newton_to_monomial);

  XPoly out;
  for (std::size_t e1 = 0; e1 <= b; ++e1)
    for (std::size_t e2 = 0; e1 + e2 <= b; ++e2)
      for (std::size_t e3 = 0; e1 + e2 + e3 <= b; ++e3) {
        const Rational& c = values[simplex(e1, e2, e3)];
        if (c == 0) continue;
        int total = static_cast<int>(e1 + e2 + e3);
        if (total > degree)
          throw ConstructionError("interpolated determinant has degree " + std::to_string(total) +
                                  " > expected " + std::to_string(degree));
        out.add_term(XMonomial{{degree - total, static_cast<int>(e1), static_cast<int>(e2),
                                static_cast<int>(e3)}},
                     c);
      }

  static const std::array<Point4, 3> checks = {
      Point4{Rational(2), Rational(-3), Rational(5), Rational(7)},
      Point4{Rational(-1), Rational(4), Rational(3, 2), Rational(-2)},
      Point4{Rational(3), Rational(1), Rational(-2), Rational(5, 3)}};
  for (const Point4& x : checks)
    if (evaluate(out, x) != det_at(m, x))
      throw ConstructionError("interpolated determinant disagrees with direct evaluation");
  return out;
}

DetOutcome det_poly(const MMatrix& m, DetBackend backend, int degree) {
  DetOutcome out;
  if (backend == DetBackend::automatic)
    backend = m.size <= 6 ? DetBackend::cofactor : DetBackend::interpolation;
  out.used = backend;
  switch (backend) {
    case DetBackend::cofactor:
      out.value = det_cofactor(m);
      break;
    case DetBackend::interpolation:
      out.value = det_interpolation(m, degree);
      break;
    case DetBackend::both: {
      out.value = det_cofactor(m);
      out.backends_agree = det_interpolation(m, degree) == out.value;
      break;
    }
    case DetBackend::automatic:
      break;
  }
  return out;
}

XPoly normalize(const XPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("cannot normalize the zero polynomial");
  mpz_class l = 1, g = 0;
  for (const auto& [mono, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  for (const auto& [mono, c] : p.terms()) {
    mpz_class num = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
  }
  Rational scale(l, g);
  scale.canonicalize();
  if (sgn(p.terms().begin()->second) < 0) scale = -scale;
  return p * scale;
}

Verification verify(const XPoly& implicit, const Parametrization& phi, std::size_t k,
                    std::size_t samples, std::uint64_t seed, bool require_leading_x3) {
  Verification v;
  v.samples_requested = samples;
  v.expected_degree = 2 * static_cast<int>(phi.mn()) - static_cast<int>(k);
  v.degree = implicit.degree();
  v.degree_ok = v.degree == v.expected_degree && implicit.is_homogeneous();
  XMonomial x3_power{{0, 0, 0, v.expected_degree}};
  v.leading_x3_nonzero = implicit.coefficient(x3_power) != 0;
  v.leading_x3_required = require_leading_x3;

  std::mt19937_64 rng(seed);
  auto draw = [&] {
    long num = static_cast<long>(rng() % 61) - 30;
    long den = static_cast<long>(rng() % 9) + 1;
    Rational q(num, den);
    q.canonicalize();
    return q;
  };
  std::size_t tries = 0;
  while (v.samples_passed < samples && tries < 100 * samples + 100) {
    ++tries;
    Point4 p{draw(), draw(), draw(), draw()};
    Point4 image;
    bool base_point = true;
    for (std::size_t i = 0; i < 4; ++i) {
      image[i] = evaluate(phi[i], p);
      if (image[i] != 0) base_point = false;
    }
    if (base_point) continue;
    if (evaluate(implicit, image) != 0) {
      v.failing_point = p;
      break;
    }
    ++v.samples_passed;
  }
  return v;
}

ImplicitResult implicitize(const ConditionReport& report, const PipelineConfig& config) {
  if (!report.passed() || !report.effective)
    throw ConditionFailure(report.failure.empty() ? "conditions not satisfied" : report.failure);
  const Parametrization& phi = *report.effective;
  ImplicitResult res;
  res.report = report;
  res.k = report.summary.k;

  if (report.route == Route::cox) {
    SyzygyBasis quadrics = moving_quadrics(phi);
    res.matrix = assemble_M_cox(quadrics, phi.syzygy_bidegree());
  } else {
    SyzygyBasis planes = moving_planes(phi);
    if (planes.dim() != res.k)
      throw ConstructionError("found " + std::to_string(planes.dim()) +
                              " moving planes, expected k = " + std::to_string(res.k));
    SyzygyBasis echelon = echelon_plane_basis(planes);
    QuadricBasis quadrics = quadric_basis_via_projection(phi, echelon.pivot_set);
    res.matrix = assemble_M(echelon, quadrics);
  }

  const int degree = 2 * static_cast<int>(phi.mn()) - static_cast<int>(res.k);
  res.determinant = det_poly(res.matrix, config.backend, degree);
  if (res.determinant.value.is_zero()) throw ConstructionError("|M| is identically zero");
  res.polynomial = normalize(res.determinant.value);
  res.degree = res.polynomial.degree();
  res.verification = verify(res.polynomial, phi, res.k, config.samples, config.conditions.seed,
                            report.route == Route::moving_quadrics);
  if (report.change) {
    const Matrix4& t = report.change->matrix;
    res.original_coordinates = normalize(substitute_linear(res.polynomial, t));
  }
  return res;
}

ImplicitResult pipeline(const Parametrization& phi, const PipelineConfig& config) {
  ConditionReport report = check_all(phi, config.conditions);
  if (!report.passed()) throw ConditionFailure(report.failure);
  ImplicitResult res = implicitize(report, config);
  if (!res.verification.passed() && !config.force)
    throw VerificationError("verification failed", std::move(res));
  if (res.determinant.backends_agree == false && !config.force)
    throw VerificationError("determinant backends disagree", std::move(res));
  return res;
}

}  // namespace bisurf
