#pragma once

#include <string>
#include <vector>

#include "growthlab/ball.hpp"
#include "growthlab/models.hpp"

namespace growthlab {

struct EntropyOptions {
  /// Residual ratio separating the growth classes; below it the report says
  /// "inconclusive" rather than guessing.
  double residual_ratio = 3.0;
};

struct EntropyReport {
  /// min over r >= 1 of ln c(r)/r; a true upper bound for the growth rate by
  /// submultiplicativity. The only certified number in the report.
  double certified_upper = 0.0;
  /// Least-squares slope of ln c(R) on R over the window; descriptive only.
  double regression_slope = 0.0;
  std::string classification;  // polynomial-consistent | exponential-consistent | inconclusive
  std::size_t window_lo = 0, window_hi = 0;
  /// Set when the census was truncated and the report used the exact prefix.
  bool truncated_input = false;
};

EntropyReport entropy_report(const BallCensus& census, const EntropyOptions& opts = {});

struct PolynomialBoundFit {
  double degree = 0.0;               // log-log least-squares slope
  double leading_coefficient = 0.0;  // exp(intercept)
  double max_residual = 0.0;         // max |ln f - fit| over the window
  std::size_t window_lo = 0, window_hi = 0;
};

/// Fits ln f(R) on ln R over R in [window_lo, window_hi]; values are indexed
/// by R and must be strictly positive on the window (length >= 3).
PolynomialBoundFit fit_polynomial_degree(const std::vector<double>& values,
                                         std::size_t window_lo,
                                         std::size_t window_hi);

/// Least-squares slope of ln f(R) on R over the window (semi-log).
double semilog_slope(const std::vector<double>& values, std::size_t window_lo,
                     std::size_t window_hi);

struct DistortionOptions {
  /// Radius budget for the subgroup-metric enumeration; 0 picks 4*R^2.
  std::size_t n_radius_budget = 0;
  std::size_t n_cap_elements = 4'000'000;
  BallOptions ball;
};

struct DistortionProfile {
  std::vector<std::size_t> radii;       // 0..R_max (complete radii only)
  std::vector<std::size_t> delta;       // max subgroup length among members
  std::vector<std::string> witness_keys;  // canonical-key minimal maximizer
  std::size_t members = 0;              // members of N found in the ball
  /// The subgroup enumeration hit its budget while still growing; reported
  /// lengths are exact but deeper members may be missing.
  bool n_ball_open = false;
  bool truncated = false;  // ambient ball truncated by the element cap
};

/// Distortion of the subgroup generated by n_generators inside the model's
/// word metric: for each R, the largest subgroup length among enumerated
/// members of the radius-R ball. Membership and subgroup lengths come from a
/// budgeted BFS over the subgroup generators inside the ambient model.
DistortionProfile distortion_profile(const ModelPtr& model,
                                     const std::vector<Element>& n_generators,
                                     std::size_t r_max,
                                     const DistortionOptions& opts = {});

}  // namespace growthlab
