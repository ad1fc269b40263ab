#pragma once

// Assembly of the mn x mn matrix M from k echelon moving planes and mn - k
// projected moving quadrics, its determinant, and exact verification.

#include "bisurf/conditions.hpp"
#include "bisurf/syzygy.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bisurf {

class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// Rewrites a basis of moving planes so that P_i has coefficient 1 on
/// s^alpha_i t^beta_i x3 and 0 on the other pivot x3-terms. Pivots come from
/// the RREF of the x3 block. Throws ConstructionError if that block has rank
/// below the number of planes.
SyzygyBasis echelon_plane_basis(const SyzygyBasis& planes);

/// Lambda_P and its complement, as (monomial, x-quadric) column labels.
struct ColumnIndexSet {
  std::vector<std::pair<BiMonomial, XMonomial>> lambda_p;
  std::vector<std::pair<BiMonomial, XMonomial>> lambda_prime;
};

ColumnIndexSet column_index_set(const Parametrization& phi, const std::vector<BiMonomial>& pivots);

struct QuadricBasis {
  /// elements[i] is the moving quadric projecting onto columns.lambda_p[i].
  std::vector<MovingSurface> elements;
  ColumnIndexSet columns;

  /// The element projecting onto the column (mono, w); throws if absent.
  const MovingSurface& preimage(const BiMonomial& mono, const XMonomial& w) const;
};

/// pi^{-1}(Lambda_P) for the projection along Lambda'. Throws ConstructionError
/// if the moving quadrics do not project isomorphically onto Lambda_P.
QuadricBasis quadric_basis_via_projection(const Parametrization& phi,
                                          const std::vector<BiMonomial>& pivots);

struct MMatrix {
  std::size_t size = 0;
  std::size_t linear_rows = 0;
  std::vector<XPoly> entries;                 // row-major
  std::vector<BiMonomial> column_monomials;   // pivots first, then C_P
  std::vector<std::string> row_labels;        // "P1", ..., "Q[st]", ...

  const XPoly& operator()(std::size_t r, std::size_t c) const { return entries[r * size + c]; }
  XPoly& operator()(std::size_t r, std::size_t c) { return entries[r * size + c]; }
};

/// Rows P_1..P_k then Q_{gamma delta} for (gamma, delta) in C_P; columns the
/// pivot monomials then C_P, so x3 sits on the first k diagonals and x3^2 on
/// the rest.
MMatrix assemble_M(const SyzygyBasis& planes, const QuadricBasis& quadrics);

/// Base-point-free case: the mn moving quadrics themselves as rows, columns in
/// canonical monomial order.
MMatrix assemble_M_cox(const SyzygyBasis& quadrics, BiDegree coeff_degree);

enum class DetBackend { cofactor, interpolation, both, automatic };

const char* to_string(DetBackend b);
DetBackend parse_backend(const std::string& name);

/// Laplace expansion along rows with minors memoized by column subset.
XPoly det_cofactor(const MMatrix& m);

/// Determinant recovered from scalar determinants at x0 = 1 and the integer
/// points x1 + x2 + x3 <= degree + 1 by Newton interpolation. Throws
/// ConstructionError if the interpolant has degree above `degree` or
/// disagrees with direct evaluation at check points.
XPoly det_interpolation(const MMatrix& m, int degree);

struct DetOutcome {
  XPoly value;
  DetBackend used = DetBackend::cofactor;
  std::optional<bool> backends_agree;  // set when both ran
};

/// `automatic` picks cofactor for size <= 6, interpolation above.
DetOutcome det_poly(const MMatrix& m, DetBackend backend, int degree);

/// Integer coprime coefficients, positive leading coefficient. Throws
/// std::invalid_argument on zero.
XPoly normalize(const XPoly& p);

struct Verification {
  std::size_t samples_requested = 0;
  std::size_t samples_passed = 0;
  std::optional<Point4> failing_point;
  int expected_degree = 0;
  int degree = 0;
  bool degree_ok = false;
  bool leading_x3_nonzero = false;
  bool leading_x3_required = true;

  bool passed() const {
    return samples_passed == samples_requested && degree_ok &&
           (leading_x3_nonzero || !leading_x3_required);
  }
};

/// Checks |M|(phi(p)) == 0 exactly at `samples` seeded parameter points that
/// avoid base points, deg |M| == 2mn - k and the x3^{2mn-k} coefficient.
Verification verify(const XPoly& implicit, const Parametrization& phi, std::size_t k,
                    std::size_t samples, std::uint64_t seed, bool require_leading_x3 = true);

struct PipelineConfig {
  ConditionConfig conditions;
  DetBackend backend = DetBackend::automatic;
  std::size_t samples = 100;
  bool force = false;
  bool assert_one_to_one = true;
};

struct ImplicitResult {
  XPoly polynomial;  // normalized, in the coordinates of `report.effective`
  int degree = 0;
  std::size_t k = 0;
  Verification verification;
  ConditionReport report;
  MMatrix matrix;
  DetOutcome determinant;
  /// With a coordinate change T: polynomial(T x), normalized.
  std::optional<XPoly> original_coordinates;
};

class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, ImplicitResult result)
      : std::runtime_error(what), result_(std::move(result)) {}
  const ImplicitResult& result() const { return result_; }

 private:
  ImplicitResult result_;
};

/// Builds |M| for a parametrization whose conditions have been checked.
ImplicitResult implicitize(const ConditionReport& report, const PipelineConfig& config);

/// check_all followed by implicitize. Throws ConditionFailure when refused and
/// VerificationError when verification fails without `force`.
ImplicitResult pipeline(const Parametrization& phi, const PipelineConfig& config = {});

}  // namespace bisurf
