#pragma once

#include <optional>
#include <string>
#include <vector>

#include "growthlab/integer_matrix.hpp"
#include "growthlab/models.hpp"
#include "growthlab/polyroots.hpp"

namespace growthlab {

struct SpectralSummary {
  IntPoly characteristic;     // monic, exact
  bool unit_circle = false;   // every eigenvalue has modulus 1
  RationalInterval lambda_max;  // encloses the maximal root modulus
  double osin_bound = 0.0;    // 0 iff unit_circle
};

/// Exact test whether every eigenvalue of an integer matrix has modulus one.
/// By Kronecker's theorem this holds iff |det| = 1 and the eigenvalues are
/// roots of unity, i.e. (A^M - I)^k = 0 for M the lcm of the finitely many
/// admissible orders {m : phi(m) <= k}.
bool unit_circle_test(const IntegerMatrix& a);

/// Rational enclosure of the maximal root modulus of char_poly(a), width
/// <= tol. Exact real-root isolation throughout: the squared moduli are real
/// roots of the pairwise root-product polynomial.
RationalInterval lambda_max(const IntegerMatrix& a, const mpq_class& tol);

/// Entropy lower bound ln2 * ln(lambda) / (ln2 + 5 ln(lambda)) for the group
/// Z^k x|_rho Z, evaluated at the conservative lower end of the enclosure.
/// Requires the lower end >= 1; returns 0 at lambda = 1.
double osin_lower_bound(const RationalInterval& lambda);

SpectralSummary spectral_summary(const IntegerMatrix& a, const mpq_class& tol);

/// The m_h x m_h integer matrix of the conjugation action of one Lambda
/// generator on a torsion-free stratum of N, rows = images of the stratum
/// basis. Torsion strata are unsupported (parameter_error).
IntegerMatrix conjugation_matrix(const ExtensionStructure& ext,
                                 std::size_t lambda_gen, std::size_t stratum);

struct ScreenEntry {
  std::string generator;
  std::size_t stratum = 0;  // 1-based in reports
  bool unit_circle = false;
  RationalInterval lambda_max;
  double osin_bound = 0.0;
};

struct ScreenNote {
  std::string generator;
  std::string status;  // "finite-order", "order-unknown", "torsion-stratum-skipped"
  std::size_t detail = 0;
};

struct ScreenReport {
  bool pass = false;         // all tested pairs on the unit circle
  bool conclusive = true;    // no generator of undecided order
  std::vector<ScreenEntry> entries;
  std::vector<ScreenNote> notes;
};

struct ScreenOptions {
  std::size_t order_budget = 10000;
  mpq_class tol = mpq_class(1, 1000000000);
};

/// Runs the eigenvalue-norm-one criterion over every infinite-order Lambda
/// generator and every torsion-free stratum.
ScreenReport virtual_nilpotency_screen(const ExtensionStructure& ext,
                                       const ScreenOptions& opts = {});

}  // namespace growthlab
