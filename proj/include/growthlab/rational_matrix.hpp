#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace growthlab {

/// Square matrix over Q with exact arbitrary-precision entries, stored in
/// lowest terms with positive denominator (mpq canonical form).
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t dim);

  static RationalMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const mpq_class& at(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }
  mpq_class& at(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

  RationalMatrix multiply(const RationalMatrix& other) const;

  /// Exact inverse via Gauss-Jordan; throws math_error on a singular matrix.
  RationalMatrix inverse() const;

  mpq_class determinant() const;

  bool is_identity() const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

  /// Deterministic injective serialization: dimension then canonical "num/den"
  /// entries. Equal matrices have equal keys.
  std::string canonical_key() const;

 private:
  std::size_t dim_ = 0;
  std::vector<mpq_class> entries_;
};

/// Parses an exact rational from "num/den" or "num" form; canonicalizes.
mpq_class parse_rational(const std::string& text);

std::string rational_to_string(const mpq_class& q);

}  // namespace growthlab
