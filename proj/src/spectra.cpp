#include "growthlab/spectra.hpp"

#include <cmath>
#include <numeric>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

unsigned long euler_phi(unsigned long n) {
  unsigned long result = n;
  unsigned long m = n;
  for (unsigned long d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      result -= result / d;
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

bool is_nilpotent_shift(const IntegerMatrix& b, std::size_t k) {
  IntegerMatrix acc = b;
  for (std::size_t i = 1; i < k && !acc.is_zero(); ++i) acc = acc.multiply(b);
  return acc.is_zero();
}

}  // namespace

bool unit_circle_test(const IntegerMatrix& a) {
  const std::size_t k = a.dim();
  if (k == 0) return true;
  if (k > 12)
    throw parameter_error(
        "unit_circle_test: dimension too large for the exact roots-of-unity test");
  mpz_class det = a.determinant();
  if (det != 1 && det != -1) return false;

  // Admissible eigenvalue orders: phi(m) <= k, hence m <= k^2 + k.
  std::vector<unsigned long> orders;
  for (unsigned long m = 1; m <= k * k + k; ++m)
    if (euler_phi(m) <= k) orders.push_back(m);

  // Cheap individual checks first: one order covering all eigenvalues.
  for (unsigned long m : orders) {
    IntegerMatrix shifted = a.power(m);
    for (std::size_t i = 0; i < k; ++i) shifted.at(i, i) -= 1;
    if (is_nilpotent_shift(shifted, k)) return true;
  }
  // Definitive check: mixed orders need the lcm of the admissible set.
  unsigned long big = 1;
  for (unsigned long m : orders) big = std::lcm(big, m);
  IntegerMatrix shifted = a.power(big);
  for (std::size_t i = 0; i < k; ++i) shifted.at(i, i) -= 1;
  return is_nilpotent_shift(shifted, k);
}

RationalInterval lambda_max(const IntegerMatrix& a, const mpq_class& tol) {
  if (tol <= 0) throw parameter_error("lambda_max: tolerance must be positive");
  IntPoly p = char_poly(a);
  // Strip zero roots.
  std::size_t z = 0;
  while (z < p.size() && p[z] == 0) ++z;
  if (z + 1 >= p.size()) return {0, 0};  // nilpotent: all roots zero
  IntPoly stripped(p.begin() + z, p.end());

  IntPoly q = root_product_poly(stripped);
  // Refine the squared modulus to within tol; sqrt halves the width at t >= 1
  // and the interval is widened by at most tol/2 by the sqrt bisection.
  RationalInterval t = isolate_max_real_root(to_rat_poly(q), tol);
  if (t.hi < 0) throw math_error("lambda_max: negative squared modulus");
  if (t.lo < 0) t.lo = 0;
  return sqrt_enclosure(t, tol);
}

double osin_lower_bound(const RationalInterval& lambda) {
  if (lambda.lo < 1)
    throw parameter_error("osin_lower_bound: enclosure must lie at or above 1");
  if (lambda.lo == 1) return 0.0;
  const double l = mpq_get_d(lambda.lo.get_mpq_t());
  const double ln2 = std::log(2.0);
  const double lnl = std::log(l);
  return ln2 * lnl / (ln2 + 5.0 * lnl);
}

SpectralSummary spectral_summary(const IntegerMatrix& a, const mpq_class& tol) {
  SpectralSummary s;
  s.characteristic = char_poly(a);
  s.unit_circle = unit_circle_test(a);
  if (s.unit_circle) {
    s.lambda_max = {1, 1};
    s.osin_bound = 0.0;
    return s;
  }
  mpq_class use_tol = tol;
  s.lambda_max = lambda_max(a, use_tol);
  // A failed unit-circle test with |det|=1 forces lambda_max > 1 strictly;
  // tighten until the enclosure clears 1 so the bound is usable.
  int guard = 0;
  while (s.lambda_max.lo <= 1 && s.lambda_max.hi > 1 && guard++ < 8) {
    use_tol /= 1024;
    s.lambda_max = lambda_max(a, use_tol);
  }
  s.osin_bound = s.lambda_max.lo >= 1 ? osin_lower_bound(s.lambda_max) : 0.0;
  return s;
}

IntegerMatrix conjugation_matrix(const ExtensionStructure& ext,
                                 std::size_t lambda_gen, std::size_t stratum) {
  const auto& pres = *ext.n_basis;
  if (stratum >= pres.stratum_count())
    throw parameter_error("conjugation_matrix: no such stratum");
  if (pres.stratum_has_torsion(stratum))
    throw parameter_error("conjugation_matrix: unsupported torsion stratum");
  auto [first, last] = pres.stratum_range(stratum);
  const std::size_t m = last - first + 1;
  if (lambda_gen >= ext.action.size())
    throw presentation_error("conjugation_matrix: no action for this generator");
  IntegerMatrix out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const ExpVec& img = ext.action[lambda_gen][first + i];
    for (std::size_t p = 0; p < m; ++p) out.at(i, p) = img[first + p];
  }
  mpz_class det = out.determinant();
  if (det != 1 && det != -1)
    throw presentation_error(
        "conjugation_matrix: action on the stratum is not an automorphism (det != +-1)");
  return out;
}

ScreenReport virtual_nilpotency_screen(const ExtensionStructure& ext,
                                       const ScreenOptions& opts) {
  ScreenReport report;
  const auto& l_set = *ext.lambda->gens();
  const auto& pres = *ext.n_basis;

  std::vector<std::size_t> testable_strata;
  for (std::size_t h = 0; h < pres.stratum_count(); ++h) {
    if (pres.stratum_has_torsion(h)) {
      report.notes.push_back({"", "torsion-stratum-skipped", h + 1});
    } else {
      testable_strata.push_back(h);
    }
  }

  bool all_unit = true;
  for (std::size_t j = 0; j < l_set.size(); ++j) {
    const std::string label = l_set.label(j);
    Element g = ext.lambda->generator_image(j);

    bool infinite = false;
    if (ext.lambda->is_identity(g)) {
      report.notes.push_back({label, "finite-order", 1});
    } else if (ext.lambda->certified_torsion_free()) {
      infinite = true;
    } else {
      std::size_t order = 0;
      Element acc = g;
      for (std::size_t i = 1; i <= opts.order_budget; ++i) {
        if (ext.lambda->is_identity(acc)) {
          order = i;
          break;
        }
        acc = ext.lambda->multiply(acc, g);
      }
      if (order > 0) {
        report.notes.push_back({label, "finite-order", order});
      } else {
        report.notes.push_back({label, "order-unknown", opts.order_budget});
        report.conclusive = false;
        infinite = true;  // screened conservatively
      }
    }
    if (!infinite) continue;

    for (std::size_t h : testable_strata) {
      IntegerMatrix m = conjugation_matrix(ext, j, h);
      ScreenEntry entry;
      entry.generator = label;
      entry.stratum = h + 1;
      entry.unit_circle = unit_circle_test(m);
      if (entry.unit_circle) {
        entry.lambda_max = {1, 1};
        entry.osin_bound = 0.0;
      } else {
        SpectralSummary s = spectral_summary(m, opts.tol);
        entry.lambda_max = s.lambda_max;
        entry.osin_bound = s.osin_bound;
        all_unit = false;
      }
      report.entries.push_back(std::move(entry));
    }
  }
  report.pass = all_unit && report.conclusive;
  return report;
}

}  // namespace growthlab
