#include "bisurf/conditions.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bisurf {

std::size_t hilbert_dim(const std::vector<BihomPoly>& generators, BiDegree d) {
  std::vector<BihomPoly> fitting;
  for (const BihomPoly& g : generators)
    if (g.bidegree().leq(d) && !g.is_zero()) fitting.push_back(g);
  if (fitting.empty()) return d.dim();
  return d.dim() - rank(build_mult_matrix(fitting, d));
}

std::vector<HilbertSample> hilbert_table(const std::vector<BihomPoly>& generators, BiDegree lo,
                                         BiDegree hi) {
  std::vector<HilbertSample> out;
  for (int k = lo.d1; k <= hi.d1; ++k)
    for (int l = lo.d2; l <= hi.d2; ++l) out.push_back({{k, l}, hilbert_dim(generators, {k, l})});
  return out;
}

const char* to_string(Stabilization s) {
  switch (s) {
    case Stabilization::stable: return "stable";
    case Stabilization::late: return "late";
    case Stabilization::growing: return "growing";
    case Stabilization::not_stabilized: return "not_stabilized";
  }
  return "?";
}

Stabilization classify(const std::vector<std::size_t>& values) {
  if (values.empty()) return Stabilization::not_stabilized;
  if (std::all_of(values.begin(), values.end(), [&](std::size_t v) { return v == values.front(); }))
    return Stabilization::stable;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1]) return Stabilization::growing;
  if (values.size() >= 2 && values[values.size() - 1] == values[values.size() - 2])
    return Stabilization::late;
  return Stabilization::not_stabilized;
}

namespace {

std::vector<std::size_t> diagonal_values(const std::vector<BihomPoly>& gens, BiDegree start,
                                         int window, std::vector<BiDegree>* degrees = nullptr) {
  std::vector<std::size_t> values;
  for (int i = 0; i <= window; ++i) {
    BiDegree d{start.d1 + i, start.d2 + i};
    if (degrees) degrees->push_back(d);
    values.push_back(hilbert_dim(gens, d));
  }
  return values;
}

}  // namespace

BasePointSummary base_point_summary(const Parametrization& phi, int window) {
  if (window < 2) throw std::invalid_argument("stabilization window must be at least 2");
  const int m = phi.m(), n = phi.n();
  BasePointSummary s;
  s.values = diagonal_values(phi.generators(), {2 * m - 1, 2 * n - 1}, window,
                             &s.stabilization_window);
  s.status = classify(s.values);
  s.finite = s.status == Stabilization::stable || s.status == Stabilization::late;
  s.k = s.values.back();
  if (!s.finite) return s;
  s.square_values = diagonal_values(phi.squared_generators(), {3 * m - 1, 3 * n - 1}, window,
                                    &s.square_window);
  s.lci_proxy = std::all_of(s.square_values.begin(), s.square_values.end(),
                            [&](std::size_t v) { return v == 3 * s.k; });
  return s;
}

Verdict check_B1(const Parametrization& phi) {
  for (std::size_t i = 0; i < 4; ++i)
    if (phi[i].is_zero()) return {false, "a" + std::to_string(i) + " is zero"};
  auto basis = monomial_basis(phi.bidegree());
  RatMatrix cols(basis.size(), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    RatVector v = coeff_vector(phi[i], basis);
    for (std::size_t r = 0; r < v.size(); ++r) cols(r, i) = v[r];
  }
  KernelBasis kb = kernel_basis(cols);
  if (kb.dim == 0) return {true, "rank 4"};
  RatVector rel = primitive(kb.vectors.front());
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < 4; ++i)
    if (rel[i] != 0) support.push_back(i);
  std::ostringstream os;
  if (support.size() == 2) {
    os << "dependent pair (" << support[0] << "," << support[1] << ")";
  } else {
    os << "dependent set {";
    for (std::size_t i = 0; i < support.size(); ++i) os << (i ? "," : "") << support[i];
    os << "} with relation (";
    for (std::size_t i = 0; i < 4; ++i) os << (i ? "," : "") << rel[i].get_str();
    os << ")";
  }
  return {false, os.str()};
}

bool check_B4(const Parametrization& phi, const BasePointSummary& summary) {
  if (!summary.finite) return false;
  return hilbert_dim(phi.generators(), {2 * phi.m() - 1, 2 * phi.n() - 1}) == summary.k;
}

SaturationResult saturation_member(const BihomPoly& f, const std::vector<BihomPoly>& generators,
                                   int max_power) {
  SaturationResult res;
  for (int N = 0; N <= max_power; ++N) {
    BiDegree target = f.bidegree() + BiDegree{N, N};
    auto multipliers = monomial_basis({N, N});
    std::vector<BihomPoly> fitting;
    for (const BihomPoly& g : generators)
      if (g.bidegree().leq(target) && !g.is_zero()) fitting.push_back(g);
    if (f.is_zero()) return {true, N, false};
    if (fitting.empty()) continue;
    RatMatrix gmat = build_mult_matrix(fitting, target);
    RatMatrix fmat = build_mult_matrix({f}, target);
    RatMatrix aug(gmat.rows(), gmat.cols() + fmat.cols());
    for (std::size_t r = 0; r < gmat.rows(); ++r) {
      for (std::size_t c = 0; c < gmat.cols(); ++c) aug(r, c) = gmat(r, c);
      for (std::size_t c = 0; c < fmat.cols(); ++c) aug(r, gmat.cols() + c) = fmat(r, c);
    }
    if (rank(aug) == rank(gmat)) return {true, N, false};
  }
  res.bound_reached = true;
  return res;
}

Matrix4 identity4() {
  Matrix4 t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t[i][j] = i == j ? 1 : 0;
  return t;
}

Parametrization apply_change(const Parametrization& phi, const Matrix4& change) {
  std::array<BihomPoly, 4> a{BihomPoly(phi.bidegree()), BihomPoly(phi.bidegree()),
                             BihomPoly(phi.bidegree()), BihomPoly(phi.bidegree())};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (change[i][j] != 0) a[i] += phi[j] * change[i][j];
  return Parametrization(phi.m(), phi.n(), std::move(a));
}

std::pair<Parametrization, Matrix4> generic_change(const Parametrization& phi, std::uint64_t seed,
                                                   int entry_bound) {
  std::mt19937_64 rng(seed);
  const std::uint64_t span = 2 * static_cast<std::uint64_t>(entry_bound) + 1;
  while (true) {
    Matrix4 t;
    RatMatrix as_mat(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        t[i][j] = static_cast<long>(rng() % span) - entry_bound;
        as_mat(i, j) = t[i][j];
      }
    if (det_bareiss(as_mat) != 0) return {apply_change(phi, t), t};
  }
}

int ConditionConfig::saturation_bound(const Parametrization& phi) const {
  return sat_bound > 0 ? sat_bound : 2 * std::max(phi.m(), phi.n()) + 2;
}

const char* to_string(Route r) {
  switch (r) {
    case Route::moving_quadrics: return "moving_quadrics";
    case Route::cox: return "cox";
    case Route::refused: return "refused";
  }
  return "?";
}

bool ConditionReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

struct AbcChecks {
  Verdict b5, b6;
  std::vector<std::size_t> abc_values;
  SaturationResult saturation;
  std::size_t syz_dim = 0;
};

// B5 and B6 are the only conditions that depend on which three of the a_i
// play the role of a0, a1, a2.
AbcChecks abc_checks(const Parametrization& phi, const BasePointSummary& summary,
                     const ConditionConfig& config) {
  AbcChecks c;
  std::vector<BihomPoly> abc{phi[0], phi[1], phi[2]};
  c.abc_values = diagonal_values(abc, {2 * phi.m() - 1, 2 * phi.n() - 1}, config.window);
  // <a0,a1,a2> may reach its stable value later than I does.
  Stabilization st = classify(c.abc_values);
  bool same_scheme = (st == Stabilization::stable || st == Stabilization::late) &&
                     c.abc_values.back() == summary.k;
  c.saturation = saturation_member(phi[3], abc, config.saturation_bound(phi));
  c.b5.pass = same_scheme && c.saturation.member;
  if (!same_scheme) {
    c.b5.witness = "dim R/<a0,a1,a2> on window = [" + join(c.abc_values) + "], deg V(I) = " +
                   std::to_string(summary.k);
  } else if (!c.saturation.member) {
    c.b5.witness = "a3 not in sat<a0,a1,a2> up to power " +
                   std::to_string(config.saturation_bound(phi));
  } else {
    c.b5.witness = "a3 * m^" + std::to_string(c.saturation.power) + " in <a0,a1,a2>";
  }
  c.syz_dim = syz_dim_abc(phi);
  c.b6.pass = c.syz_dim == 0;
  c.b6.witness = "dim Syz(a0,a1,a2) = " + std::to_string(c.syz_dim);
  return c;
}

void store(ConditionReport& rep, AbcChecks&& c) {
  rep.verdicts[4] = std::move(c.b5);
  rep.verdicts[5] = std::move(c.b6);
  rep.abc_values = std::move(c.abc_values);
  rep.saturation = c.saturation;
  rep.syz_abc_dim = c.syz_dim;
}

}  // namespace

ConditionReport check_all(const Parametrization& phi, const ConditionConfig& config) {
  ConditionReport rep;
  const std::size_t mn = phi.mn();

  rep.verdicts[0] = check_B1(phi);

  rep.summary = base_point_summary(phi, config.window);
  const BasePointSummary& s = rep.summary;
  rep.verdicts[1].pass = s.finite && s.k <= mn;
  rep.verdicts[1].witness = "dim R/I on window = [" + join(s.values) + "] (" +
                            to_string(s.status) + "), k = " + std::to_string(s.k) +
                            ", mn = " + std::to_string(mn);

  rep.verdicts[2].pass = s.finite && s.lci_proxy;
  rep.verdicts[2].witness = s.finite ? "dim R/I^2 on window = [" + join(s.square_values) +
                                           "], 3k = " + std::to_string(3 * s.k)
                                     : "base locus not finite";

  rep.regularity_value = hilbert_dim(phi.generators(), {2 * phi.m() - 1, 2 * phi.n() - 1});
  rep.verdicts[3].pass = s.finite && rep.regularity_value == s.k;
  rep.verdicts[3].witness = "dim (R/I)_" + BiDegree{2 * phi.m() - 1, 2 * phi.n() - 1}.str() +
                            " = " + std::to_string(rep.regularity_value) +
                            ", deg V(I) = " + std::to_string(s.k);

  if (s.finite) {
    store(rep, abc_checks(phi, s, config));
  } else {
    rep.verdicts[4] = {false, "base locus not finite"};
    rep.verdicts[5] = {false, "not evaluated"};
    rep.syz_abc_dim = syz_dim_abc(phi);
  }

  for (std::size_t i = 0; i < 4; ++i) {
    if (!rep.verdicts[i].pass) {
      rep.failure = "B" + std::to_string(i + 1) + ": " + rep.verdicts[i].witness;
      rep.route = Route::refused;
      return rep;
    }
  }

  if (s.k == 0) {
    // B4 with k = 0 says MP is an isomorphism.
    rep.route = Route::cox;
    rep.effective = phi;
    return rep;
  }

  if (rep.verdicts[4].pass && rep.verdicts[5].pass) {
    rep.route = Route::moving_quadrics;
    rep.effective = phi;
    return rep;
  }

  for (int attempt = 0; attempt < config.attempts; ++attempt) {
    std::uint64_t seed = config.seed + static_cast<std::uint64_t>(attempt);
    auto [changed, t] = generic_change(phi, seed, config.entry_bound);
    AbcChecks c = abc_checks(changed, s, config);
    if (c.b5.pass && c.b6.pass) {
      store(rep, std::move(c));
      rep.change = CoordinateChange{t, seed, attempt};
      rep.effective = std::move(changed);
      rep.route = Route::moving_quadrics;
      return rep;
    }
  }
  std::size_t bad = rep.verdicts[4].pass ? 5 : 4;
  rep.failure = "B" + std::to_string(bad + 1) + ": " + rep.verdicts[bad].witness + " (after " +
                std::to_string(config.attempts) + " coordinate changes)";
  rep.route = Route::refused;
  return rep;
}

}  // namespace bisurf
