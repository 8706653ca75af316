#include "growthlab/integer_matrix.hpp"

#include "growthlab/errors.hpp"

namespace growthlab {

IntegerMatrix::IntegerMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, mpz_class(0)) {}

IntegerMatrix::IntegerMatrix(std::size_t dim, std::vector<mpz_class> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (entries_.size() != dim * dim)
    throw structural_error("integer matrix: entry count does not match dimension");
}

IntegerMatrix IntegerMatrix::identity(std::size_t dim) {
  IntegerMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::multiply(const IntegerMatrix& other) const {
  if (dim_ != other.dim_)
    throw structural_error("integer matrix multiply: dimension mismatch");
  IntegerMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const mpz_class& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) out.at(i, j) += a * other.at(k, j);
    }
  return out;
}

IntegerMatrix IntegerMatrix::power(unsigned long e) const {
  IntegerMatrix base = *this;
  IntegerMatrix acc = identity(dim_);
  while (e > 0) {
    if (e & 1) acc = acc.multiply(base);
    e >>= 1;
    if (e) base = base.multiply(base);
  }
  return acc;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out.at(j, i) = at(i, j);
  return out;
}

mpz_class IntegerMatrix::determinant() const {
  if (dim_ == 0) return 1;
  // Bareiss: division-free pivots, exact over Z.
  std::vector<mpz_class> a = entries_;
  auto e = [&](std::size_t r, std::size_t c) -> mpz_class& {
    return a[r * dim_ + c];
  };
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < dim_; ++k) {
    if (e(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < dim_ && e(swap_row, k) == 0) ++swap_row;
      if (swap_row == dim_) return 0;
      for (std::size_t j = 0; j < dim_; ++j) std::swap(e(k, j), e(swap_row, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < dim_; ++i)
      for (std::size_t j = k + 1; j < dim_; ++j) {
        mpz_class num = e(i, j) * e(k, k) - e(i, k) * e(k, j);
        mpz_divexact(e(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = e(k, k);
  }
  return sign * e(dim_ - 1, dim_ - 1);
}

bool IntegerMatrix::is_zero() const {
  for (const auto& x : entries_)
    if (x != 0) return false;
  return true;
}

bool IntegerMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace growthlab
