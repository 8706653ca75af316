#include "growthlab/analytics.hpp"

#include <cmath>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0, max_abs = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit fit;
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw parameter_error("least squares: degenerate window");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss += r * r;
    fit.max_abs = std::max(fit.max_abs, std::abs(r));
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace

EntropyReport entropy_report(const BallCensus& census, const EntropyOptions& opts) {
  const auto& c = census.cumulative;
  if (c.size() < 5)
    throw parameter_error("entropy_report: need at least 4 untruncated radii");
  const std::size_t r_complete = c.size() - 1;

  EntropyReport report;
  report.truncated_input = census.truncated;
  report.certified_upper = std::log(static_cast<double>(c[1]));
  for (std::size_t r = 1; r <= r_complete; ++r) {
    const double v = std::log(static_cast<double>(c[r])) / static_cast<double>(r);
    if (v < report.certified_upper) report.certified_upper = v;
  }

  report.window_lo = (r_complete + 1) / 2;
  report.window_hi = r_complete;

  std::vector<double> rs, lnr, lnc;
  for (std::size_t r = report.window_lo; r <= report.window_hi; ++r) {
    rs.push_back(static_cast<double>(r));
    lnr.push_back(std::log(static_cast<double>(r)));
    lnc.push_back(std::log(static_cast<double>(c[r])));
  }
  LineFit semi = least_squares(rs, lnc);
  LineFit loglog = least_squares(lnr, lnc);
  report.regression_slope = semi.slope;

  const double tiny = 1e-12;
  if (semi.rms <= tiny && loglog.rms <= tiny) {
    // Both exact: only a constant census does this; degree-0 polynomial.
    report.classification =
        std::abs(semi.slope) < 1e-9 ? "polynomial-consistent" : "inconclusive";
  } else if (semi.rms > opts.residual_ratio * loglog.rms) {
    report.classification = "polynomial-consistent";
  } else if (loglog.rms > opts.residual_ratio * semi.rms) {
    report.classification = "exponential-consistent";
  } else {
    report.classification = "inconclusive";
  }
  return report;
}

PolynomialBoundFit fit_polynomial_degree(const std::vector<double>& values,
                                         std::size_t window_lo,
                                         std::size_t window_hi) {
  if (window_lo < 1 || window_hi < window_lo + 2 || window_hi >= values.size())
    throw parameter_error("fit_polynomial_degree: bad window");
  std::vector<double> lnr, lnf;
  for (std::size_t r = window_lo; r <= window_hi; ++r) {
    if (!(values[r] > 0))
      throw parameter_error("fit_polynomial_degree: series not positive on window");
    lnr.push_back(std::log(static_cast<double>(r)));
    lnf.push_back(std::log(values[r]));
  }
  LineFit fit = least_squares(lnr, lnf);
  PolynomialBoundFit out;
  out.degree = fit.slope;
  out.leading_coefficient = std::exp(fit.intercept);
  out.max_residual = fit.max_abs;
  out.window_lo = window_lo;
  out.window_hi = window_hi;
  return out;
}

double semilog_slope(const std::vector<double>& values, std::size_t window_lo,
                     std::size_t window_hi) {
  if (window_hi < window_lo + 2 || window_hi >= values.size())
    throw parameter_error("semilog_slope: bad window");
  std::vector<double> rs, lnf;
  for (std::size_t r = window_lo; r <= window_hi; ++r) {
    if (!(values[r] > 0))
      throw parameter_error("semilog_slope: series not positive on window");
    rs.push_back(static_cast<double>(r));
    lnf.push_back(std::log(values[r]));
  }
  return least_squares(rs, lnf).slope;
}

DistortionProfile distortion_profile(const ModelPtr& model,
                                     const std::vector<Element>& n_generators,
                                     std::size_t r_max,
                                     const DistortionOptions& opts) {
  if (n_generators.empty())
    throw parameter_error("distortion_profile: empty subgroup generating set");

  Ball ambient = enumerate_ball(model, r_max, opts.ball);

  // Symmetrize the subgroup generators and enumerate the subgroup with its
  // own word metric inside the ambient model.
  std::vector<Element> sym;
  for (const auto& g : n_generators) {
    sym.push_back(g);
    sym.push_back(model->inverse(g));
  }
  std::size_t budget = opts.n_radius_budget;
  if (budget == 0) budget = 4 * r_max * r_max + 8;
  BallOptions n_opts = opts.ball;
  n_opts.cap_elements = opts.n_cap_elements;
  Ball subgroup = enumerate_ball_with(model, std::move(sym), budget, n_opts);

  DistortionProfile profile;
  profile.truncated = ambient.truncated();
  profile.n_ball_open = !subgroup.closed();

  // Members: ambient-ball elements found in the subgroup enumeration.
  // delta is the running max of subgroup length by ambient radius; witnesses
  // are the canonical-key smallest maximizers.
  const std::size_t r_complete = ambient.completed_radius();
  std::vector<std::vector<std::pair<std::size_t, std::string>>> by_radius(
      r_complete + 1);
  for (std::size_t i = 0; i < ambient.size(); ++i) {
    const std::string key = model->canonical_key(ambient.element(i));
    if (auto idx = subgroup.find(key)) {
      by_radius[ambient.radius(i)].emplace_back(subgroup.radius(*idx), key);
      ++profile.members;
    }
  }
  std::size_t best = 0;
  std::string witness;
  for (std::size_t r = 0; r <= r_complete; ++r) {
    for (const auto& [len, key] : by_radius[r]) {
      if (len > best || witness.empty()) {
        best = len;
        witness = key;
      } else if (len == best && key < witness) {
        witness = key;
      }
    }
    profile.radii.push_back(r);
    profile.delta.push_back(best);
    profile.witness_keys.push_back(witness);
  }
  return profile;
}

}  // namespace growthlab
