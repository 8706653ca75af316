#include "growthlab/polyroots.hpp"

#include <algorithm>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

mpz_class trace(const IntegerMatrix& m) {
  mpz_class t = 0;
  for (std::size_t i = 0; i < m.dim(); ++i) t += m.at(i, i);
  return t;
}

}  // namespace

IntPoly char_poly(const IntegerMatrix& a) {
  const std::size_t n = a.dim();
  if (n == 0) return {mpz_class(1)};
  IntPoly c(n + 1);
  c[n] = 1;
  IntegerMatrix m = a;
  c[n - 1] = -trace(m);
  for (std::size_t k = 2; k <= n; ++k) {
    // M <- A (M + c_{n-k+1} I); the trace division is exact over Z.
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) += c[n - k + 1];
    m = a.multiply(m);
    mpz_class t = -trace(m);
    mpz_class q;
    mpz_divexact_ui(q.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = q;
  }
  return c;
}

IntPoly root_product_poly(const IntPoly& p) {
  const std::size_t k = p.size() - 1;
  if (k == 0) throw parameter_error("root_product_poly: constant polynomial");
  if (p[0] == 0)
    throw parameter_error("root_product_poly: zero constant term (zero root)");

  const std::size_t deg = k * k;
  // Evaluate q(x0) = Res_y(p(y), sum_i c_i x0^i y^{k-i}) as a 2k x 2k integer
  // Sylvester determinant, then interpolate the degree-k^2 polynomial.
  std::vector<mpz_class> xs, vs;
  for (long j = 0; xs.size() < deg + 1; ++j) {
    long x0 = (j % 2 == 0) ? j / 2 : -(j / 2 + 1);  // 0, -1, 1, -2, 2, ...
    xs.emplace_back(x0);
  }
  for (const auto& x0 : xs) {
    // g(y) = sum_i p[i] x0^i y^{k-i}; coefficient of y^{k-i} is p[i] x0^i.
    std::vector<mpz_class> g(k + 1);
    mpz_class pw = 1;
    for (std::size_t i = 0; i <= k; ++i) {
      g[k - i] = p[i] * pw;
      pw *= x0;
    }
    IntegerMatrix syl(2 * k);
    // rows 0..k-1: shifted p (descending), rows k..2k-1: shifted g.
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i <= k; ++i) syl.at(r, r + i) = p[k - i];
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i <= k; ++i) syl.at(k + r, r + i) = g[k - i];
    vs.push_back(syl.determinant());
  }

  // Newton interpolation over Q, expanded to monomial coefficients.
  const std::size_t npts = deg + 1;
  std::vector<mpq_class> coef(npts);
  for (std::size_t i = 0; i < npts; ++i) coef[i] = mpq_class(vs[i]);
  for (std::size_t level = 1; level < npts; ++level)
    for (std::size_t i = npts - 1; i >= level; --i) {
      coef[i] = (coef[i] - coef[i - 1]) / mpq_class(xs[i] - xs[i - level]);
      if (i == level) break;
    }
  RatPoly q(npts, mpq_class(0));
  RatPoly basis{mpq_class(1)};  // prod_{l<level} (x - x_l)
  for (std::size_t level = 0; level < npts; ++level) {
    for (std::size_t i = 0; i < basis.size(); ++i) q[i] += coef[level] * basis[i];
    if (level + 1 < npts) {
      RatPoly next(basis.size() + 1, mpq_class(0));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        next[i + 1] += basis[i];
        next[i] -= mpq_class(xs[level]) * basis[i];
      }
      basis = std::move(next);
    }
  }

  IntPoly out(npts);
  for (std::size_t i = 0; i < npts; ++i) {
    q[i].canonicalize();
    if (q[i].get_den() != 1)
      throw math_error("root_product_poly: interpolation not integral");
    out[i] = q[i].get_num();
  }
  while (out.size() > 1 && out.back() == 0) out.pop_back();
  return out;
}

RatPoly to_rat_poly(const IntPoly& p) {
  RatPoly out;
  out.reserve(p.size());
  for (const auto& c : p) out.emplace_back(c);
  trim(out);
  return out;
}

RatPoly derivative(const RatPoly& p) {
  RatPoly out;
  for (std::size_t i = 1; i < p.size(); ++i)
    out.push_back(p[i] * mpq_class(static_cast<long>(i)));
  trim(out);
  return out;
}

RatPoly poly_mod(const RatPoly& a, const RatPoly& b) {
  if (b.empty()) throw parameter_error("poly_mod: division by zero polynomial");
  RatPoly r = a;
  trim(r);
  while (!r.empty() && r.size() >= b.size()) {
    mpq_class f = r.back() / b.back();
    const std::size_t shift = r.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    trim(r);
  }
  return r;
}

namespace {

RatPoly normalized(RatPoly p) {
  trim(p);
  if (p.empty()) return p;
  mpq_class lead = abs(p.back());
  for (auto& c : p) c /= lead;
  return p;
}

RatPoly poly_gcd(RatPoly a, RatPoly b) {
  a = normalized(std::move(a));
  b = normalized(std::move(b));
  while (!b.empty()) {
    RatPoly r = normalized(poly_mod(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

RatPoly poly_div_exact(const RatPoly& a, const RatPoly& b) {
  RatPoly r = a;
  RatPoly q(a.size(), mpq_class(0));
  trim(r);
  while (!r.empty() && r.size() >= b.size()) {
    mpq_class f = r.back() / b.back();
    const std::size_t shift = r.size() - b.size();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= f * b[i];
    trim(r);
  }
  trim(q);
  return q;
}

}  // namespace

RatPoly square_free_part(const RatPoly& p) {
  RatPoly g = poly_gcd(p, derivative(p));
  if (g.size() <= 1) {
    RatPoly out = p;
    trim(out);
    return out;
  }
  return poly_div_exact(p, g);
}

int sign_at(const RatPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return sgn(acc);
}

mpq_class cauchy_root_bound(const RatPoly& p) {
  mpq_class bound = 0;
  const mpq_class lead = abs(p.back());
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    mpq_class r = abs(p[i]) / lead;
    if (r > bound) bound = r;
  }
  return bound + 1;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
  std::vector<RatPoly> chain;
  chain.push_back(normalized(p));
  RatPoly d = normalized(derivative(p));
  if (!d.empty()) chain.push_back(d);
  while (chain.back().size() > 1) {
    RatPoly r = poly_mod(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(normalized(std::move(r)));
  }
  return chain;
}

int sign_variations_at(const std::vector<RatPoly>& chain, const mpq_class& x) {
  int variations = 0;
  int prev = 0;
  for (const auto& p : chain) {
    const int s = p.empty() ? 0 : sign_at(p, x);
    if (s != 0) {
      if (prev != 0 && s != prev) ++variations;
      prev = s;
    }
  }
  return variations;
}

int count_roots_in(const std::vector<RatPoly>& chain, const mpq_class& lo,
                   const mpq_class& hi) {
  return sign_variations_at(chain, lo) - sign_variations_at(chain, hi);
}

namespace {

/// Rational roots of the monic-derived polynomials here are integers; try
/// small integer divisors of the constant term.
std::vector<mpz_class> integer_root_candidates(const RatPoly& p,
                                               const mpq_class& bound) {
  std::vector<mpz_class> out{0, 1};
  if (p.empty() || p.front() == 0) return out;
  mpz_class c0 = abs(p.front().get_num() * p.back().get_den());
  if (c0 <= 4000000) {
    const unsigned long n = c0.get_ui();
    for (unsigned long d = 1; d * d <= n; ++d) {
      if (n % d) continue;
      out.emplace_back(d);
      out.emplace_back(n / d);
    }
  } else {
    for (unsigned long d = 2; d <= 64; ++d)
      if (mpz_divisible_ui_p(c0.get_mpz_t(), d)) out.emplace_back(d);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::erase_if(out, [&](const mpz_class& d) { return mpq_class(d) > bound; });
  return out;
}

}  // namespace

RationalInterval isolate_max_real_root(const RatPoly& p, const mpq_class& tol) {
  if (tol <= 0) throw parameter_error("isolate_max_real_root: tol must be positive");
  RatPoly sf = square_free_part(p);
  const mpq_class bound = cauchy_root_bound(sf);
  auto chain = sturm_chain(sf);

  if (count_roots_in(chain, -bound, bound) < 1)
    throw math_error("isolate_max_real_root: no real root");

  auto candidates = integer_root_candidates(sf, bound);
  for (std::size_t i = candidates.size(); i-- > 0;) {
    mpq_class r(candidates[i]);
    if (sign_at(sf, r) == 0 && count_roots_in(chain, r, bound) == 0) return {r, r};
  }

  mpq_class lo = -bound, hi = bound;
  while (hi - lo > tol) {
    mpq_class mid = (lo + hi) / 2;
    if (sign_at(sf, mid) == 0) {
      // mid is a root; it is the maximum iff nothing lies above it.
      if (count_roots_in(chain, mid, bound) == 0) return {mid, mid};
      lo = mid;
      continue;
    }
    if (count_roots_in(chain, mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

namespace {

bool exact_sqrt(const mpq_class& x, mpq_class& out) {
  if (x < 0) return false;
  mpz_class num = x.get_num(), den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  out = mpq_class(rn) / mpq_class(rd);
  return true;
}

mpq_class sqrt_lower(const mpq_class& t, const mpq_class& eps) {
  if (t <= 0) return 0;
  mpq_class exact;
  if (exact_sqrt(t, exact)) return exact;
  mpq_class lo = 0, hi = t < 1 ? mpq_class(1) : t;
  while (hi - lo > eps) {
    mpq_class mid = (lo + hi) / 2;
    if (mid * mid <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

mpq_class sqrt_upper(const mpq_class& t, const mpq_class& eps) {
  if (t <= 0) return 0;
  mpq_class exact;
  if (exact_sqrt(t, exact)) return exact;
  mpq_class lo = 0, hi = t < 1 ? mpq_class(1) : t;
  while (hi - lo > eps) {
    mpq_class mid = (lo + hi) / 2;
    if (mid * mid >= t)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

RationalInterval sqrt_enclosure(const RationalInterval& t, const mpq_class& tol) {
  if (t.lo < 0) throw parameter_error("sqrt_enclosure: negative interval");
  const mpq_class eps = tol / 4;
  return {sqrt_lower(t.lo, eps), sqrt_upper(t.hi, eps)};
}

}  // namespace growthlab
