#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace growthlab {

/// Square matrix over Z with arbitrary-precision entries; carrier for the
/// induced conjugation actions on free-abelian strata.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(std::size_t dim);
  IntegerMatrix(std::size_t dim, std::vector<mpz_class> entries);

  static IntegerMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const mpz_class& at(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }
  mpz_class& at(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }

  IntegerMatrix multiply(const IntegerMatrix& other) const;
  IntegerMatrix power(unsigned long e) const;
  IntegerMatrix transpose() const;

  /// Exact determinant (fraction-free Bareiss elimination).
  mpz_class determinant() const;

  bool is_zero() const;
  bool is_identity() const;

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.dim_ == b.dim_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<mpz_class> entries_;
};

}  // namespace growthlab
