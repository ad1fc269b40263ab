#pragma once

// Base-point conditions B1..B6 decided with finite-dimensional linear algebra:
// bigraded Hilbert functions, their stabilization, ideal membership at fixed
// bidegree and seeded generic coordinate changes of P^3.

#include "bisurf/linalg.hpp"
#include "bisurf/syzygy.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bisurf {

/// dim (R/I)_d where I is generated by `generators`. Generators of bidegree
/// larger than d contribute nothing.
std::size_t hilbert_dim(const std::vector<BihomPoly>& generators, BiDegree d);

struct HilbertSample {
  BiDegree degree;
  std::size_t value = 0;
};

/// Values of dim (R/I) over the rectangle lo <= d <= hi, row-major in d1.
std::vector<HilbertSample> hilbert_table(const std::vector<BihomPoly>& generators, BiDegree lo,
                                         BiDegree hi);

enum class Stabilization {
  stable,          // constant over the window
  late,            // non-increasing, constant over the last two samples
  growing,         // increases somewhere: V(I) has a curve component
  not_stabilized,  // still decreasing at the end of the window
};

const char* to_string(Stabilization s);

/// Classifies Hilbert samples taken along d, d+(1,1), d+(2,2), ...
Stabilization classify(const std::vector<std::size_t>& values);

struct BasePointSummary {
  bool finite = false;
  std::size_t k = 0;  // deg V(I)
  bool lci_proxy = false;
  Stabilization status = Stabilization::not_stabilized;
  std::vector<BiDegree> stabilization_window;  // (2m-1+i, 2n-1+i)
  std::vector<std::size_t> values;             // dim (R/I) on the window
  std::vector<BiDegree> square_window;         // (3m-1+i, 3n-1+i)
  std::vector<std::size_t> square_values;      // dim (R/I^2) on that window
};

/// Samples i = 0..window. Throws std::invalid_argument if window < 2.
BasePointSummary base_point_summary(const Parametrization& phi, int window);

struct Verdict {
  bool pass = false;
  std::string witness;
};

/// a0..a3 linearly independent in R_{m,n}.
Verdict check_B1(const Parametrization& phi);
/// dim (R/I)_{2m-1,2n-1} == k.
bool check_B4(const Parametrization& phi, const BasePointSummary& summary);

struct SaturationResult {
  bool member = false;
  int power = -1;  // smallest N that worked, -1 if none
  bool bound_reached = false;
};

/// Is mu*f in <generators> for every monomial mu of bidegree (N,N), for some
/// N <= max_power? Tries N = 0, 1, ... in order.
SaturationResult saturation_member(const BihomPoly& f, const std::vector<BihomPoly>& generators,
                                   int max_power);

using Matrix4 = std::array<std::array<Rational, 4>, 4>;

Matrix4 identity4();
/// a'_i = sum_j change[i][j] a_j.
Parametrization apply_change(const Parametrization& phi, const Matrix4& change);

/// Seeded random integer matrix with entries in [-entry_bound, entry_bound],
/// redrawn until invertible; returns T*phi and T.
std::pair<Parametrization, Matrix4> generic_change(const Parametrization& phi, std::uint64_t seed,
                                                   int entry_bound = 10);

struct ConditionConfig {
  int window = 3;
  int sat_bound = 0;  // 0 selects 2*max(m,n)+2
  std::uint64_t seed = 0;
  int attempts = 10;
  int entry_bound = 10;

  int saturation_bound(const Parametrization& phi) const;
};

enum class Route {
  moving_quadrics,  // B1..B6 hold, possibly after a coordinate change
  cox,              // no base points and MP of maximal rank
  refused,
};

const char* to_string(Route r);

struct CoordinateChange {
  Matrix4 matrix;
  std::uint64_t seed = 0;
  int attempt = 0;
};

struct ConditionReport {
  std::array<Verdict, 6> verdicts;  // B1..B6
  BasePointSummary summary;
  std::size_t regularity_value = 0;  // dim (R/I)_{2m-1,2n-1}
  std::size_t syz_abc_dim = 0;
  SaturationResult saturation;
  std::vector<std::size_t> abc_values;  // dim (R/<a0,a1,a2>) on the stabilization window
  Route route = Route::refused;
  std::optional<CoordinateChange> change;
  /// phi after the recorded coordinate change (phi itself if none).
  std::optional<Parametrization> effective;
  std::string failure;  // "B<i>: witness" of the first blocking condition

  bool passed() const { return route != Route::refused; }
  bool all_pass() const;
};

class ConditionFailure : public std::runtime_error {
 public:
  explicit ConditionFailure(const std::string& what) : std::runtime_error(what) {}
};

ConditionReport check_all(const Parametrization& phi, const ConditionConfig& config = {});

}  // namespace bisurf
