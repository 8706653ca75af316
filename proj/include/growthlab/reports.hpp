#pragma once

#include <cstdint>
#include <string>

#include "growthlab/analytics.hpp"
#include "growthlab/ball.hpp"
#include "growthlab/rewriting.hpp"
#include "growthlab/spectra.hpp"

namespace growthlab {

inline constexpr const char* kToolVersion = "0.1.0";

/// Every floating report field is rendered as a decimal string with 12
/// significant digits; exact integers are unbounded. Payloads are therefore
/// byte-identical across runs with the same seed and inputs.
struct Manifest {
  std::string command;
  std::string spec_path;
  std::string spec_sha256;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::int64_t wall_ms = 0;
};

std::string census_csv(const BallCensus& census);
std::string census_json(const BallCensus& census);
std::string census_plot(const BallCensus& census);  // two-column R, cumulative
std::string entropy_json(const EntropyReport& report);
std::string screen_json(const ScreenReport& report);
std::string distortion_csv(const DistortionProfile& profile);
std::string distortion_plot(const DistortionProfile& profile);
std::string rewrite_trace_csv(const PrefixGrowthReport& report);

struct FitContext {
  bool from_rewrite = false;
  bool screened = false;
  double semilog_slope = 0.0;
  std::uint64_t seed = 0;
};
std::string fit_json(const PolynomialBoundFit& fit, const FitContext& ctx = {});

std::string sandwich_json(const SandwichReport& report);
std::string closure_json(const ClosureResult& result, std::size_t cap);
std::string graded_json(const GradedReport& report);
std::string manifest_json(const Manifest& manifest);

/// Writes a report file; refuses to overwrite unless force is set.
void write_report(const std::string& path, const std::string& content, bool force);

}  // namespace growthlab
