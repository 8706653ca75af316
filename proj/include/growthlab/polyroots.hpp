#pragma once

#include <gmpxx.h>

#include <vector>

#include "growthlab/integer_matrix.hpp"

namespace growthlab {

/// Integer polynomial, coeff[i] multiplying x^i.
using IntPoly = std::vector<mpz_class>;
/// Rational polynomial in the same layout.
using RatPoly = std::vector<mpq_class>;

/// Exact monic characteristic polynomial via Faddeev-LeVerrier (the interior
/// divisions are exact over Z).
IntPoly char_poly(const IntegerMatrix& a);

/// Polynomial whose roots are all pairwise products lambda_i * lambda_j of the
/// roots of p (constant term of p must be nonzero). Degree deg(p)^2. Computed
/// as the Sylvester resultant Res_y(p(y), y^k p(x/y)), evaluated at integer
/// points and interpolated exactly.
IntPoly root_product_poly(const IntPoly& p);

RatPoly to_rat_poly(const IntPoly& p);
RatPoly derivative(const RatPoly& p);
RatPoly poly_mod(const RatPoly& a, const RatPoly& b);
RatPoly square_free_part(const RatPoly& p);
int sign_at(const RatPoly& p, const mpq_class& x);
mpq_class cauchy_root_bound(const RatPoly& p);

/// Sturm chain of a square-free polynomial.
std::vector<RatPoly> sturm_chain(const RatPoly& p);
int sign_variations_at(const std::vector<RatPoly>& chain, const mpq_class& x);
/// Number of distinct real roots in (lo, hi].
int count_roots_in(const std::vector<RatPoly>& chain, const mpq_class& lo,
                   const mpq_class& hi);

struct RationalInterval {
  mpq_class lo, hi;
  mpq_class width() const { return hi - lo; }
};

/// Encloses the largest real root of a nonconstant polynomial with at least
/// one real root; width <= tol, or exact [r, r] when the root is recognized
/// as an integer.
RationalInterval isolate_max_real_root(const RatPoly& p, const mpq_class& tol);

/// Encloses sqrt over a nonnegative rational interval; exact when both ends
/// are equal perfect squares.
RationalInterval sqrt_enclosure(const RationalInterval& t, const mpq_class& tol);

}  // namespace growthlab
