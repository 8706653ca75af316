#include "growthlab/rational_matrix.hpp"

#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

RationalMatrix::RationalMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim, mpq_class(0)) {}

RationalMatrix RationalMatrix::identity(std::size_t dim) {
  RationalMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::multiply(const RationalMatrix& other) const {
  if (dim_ != other.dim_)
    throw structural_error("matrix multiply: dimension mismatch");
  RationalMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const mpq_class& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        const mpq_class& b = other.at(k, j);
        if (b == 0) continue;
        out.at(i, j) += a * b;
      }
    }
  }
  return out;
}

RationalMatrix RationalMatrix::inverse() const {
  RationalMatrix a = *this;
  RationalMatrix inv = identity(dim_);
  for (std::size_t col = 0; col < dim_; ++col) {
    std::size_t pivot = col;
    while (pivot < dim_ && a.at(pivot, col) == 0) ++pivot;
    if (pivot == dim_) throw math_error("matrix inverse: singular matrix");
    if (pivot != col) {
      for (std::size_t j = 0; j < dim_; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    const mpq_class p = a.at(col, col);
    for (std::size_t j = 0; j < dim_; ++j) {
      a.at(col, j) /= p;
      inv.at(col, j) /= p;
    }
    for (std::size_t r = 0; r < dim_; ++r) {
      if (r == col) continue;
      const mpq_class f = a.at(r, col);
      if (f == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        a.at(r, j) -= f * a.at(col, j);
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

mpq_class RationalMatrix::determinant() const {
  RationalMatrix a = *this;
  mpq_class det = 1;
  for (std::size_t col = 0; col < dim_; ++col) {
    std::size_t pivot = col;
    while (pivot < dim_ && a.at(pivot, col) == 0) ++pivot;
    if (pivot == dim_) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < dim_; ++j)
        std::swap(a.at(pivot, j), a.at(col, j));
      det = -det;
    }
    det *= a.at(col, col);
    const mpq_class p = a.at(col, col);
    for (std::size_t r = col + 1; r < dim_; ++r) {
      const mpq_class f = a.at(r, col) / p;
      if (f == 0) continue;
      for (std::size_t j = col; j < dim_; ++j) a.at(r, j) -= f * a.at(col, j);
    }
  }
  return det;
}

bool RationalMatrix::is_identity() const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

std::string RationalMatrix::canonical_key() const {
  std::ostringstream out;
  out << 'M' << dim_;
  for (const auto& e : entries_) out << ' ' << e.get_str();
  return out.str();
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw parse_error("empty rational literal");
  mpq_class q;
  if (q.set_str(text, 10) != 0)
    throw parse_error("bad rational literal '" + text + "'");
  if (q.get_den() == 0)
    throw math_error("rational literal with zero denominator '" + text + "'");
  q.canonicalize();
  return q;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

}  // namespace growthlab
