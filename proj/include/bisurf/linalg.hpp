#pragma once

#include "bisurf/ring.hpp"

#include <optional>
#include <span>
#include <vector>

namespace bisurf {

/// Dense row-major matrix over Q.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  RatVector column(std::size_t c) const;

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& o) const;
  RatVector operator*(std::span<const Rational> v) const;

  /// Columns in `order`, which may repeat or drop columns.
  RatMatrix select_columns(std::span<const std::size_t> order) const;

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

struct RrefResult {
  RatMatrix reduced;
  std::vector<std::size_t> pivots;  // h_1 < ... < h_r
  RatMatrix transform;              // reduced == transform * input; empty if not requested
};

/// Reduced row echelon form by fraction-free (Bareiss) forward elimination on
/// integer-scaled rows, followed by rational back substitution. Pivots are the
/// first nonzero entry in column order.
RrefResult rref(const RatMatrix& a, bool want_transform = true);

/// Rank via the fraction-free forward phase only.
std::size_t rank(const RatMatrix& a);

struct KernelBasis {
  std::size_t dim = 0;
  std::vector<RatVector> vectors;
};

/// One vector per free column of rref(a): 1 at the free column, zero at the
/// other free columns.
KernelBasis kernel_basis(const RatMatrix& a);

/// x with a*x == b, or nullopt if b is not in the column span.
std::optional<RatVector> solve_membership(const RatMatrix& a, std::span<const Rational> b);

/// Exact determinant; throws std::invalid_argument for non-square input.
Rational det_bareiss(const RatMatrix& a);

/// Scales v to integer coprime entries with positive first nonzero entry.
RatVector primitive(RatVector v);

}  // namespace bisurf
