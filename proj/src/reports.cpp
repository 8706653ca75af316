#include "growthlab/reports.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "growthlab/errors.hpp"
#include "growthlab/util.hpp"

namespace growthlab {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string g12(double x) { return format_g12(x); }

std::string q12(const mpq_class& q) { return format_g12(mpq_get_d(q.get_mpq_t())); }

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string census_csv(const BallCensus& census) {
  std::ostringstream out;
  out << "radius,cumulative,sphere,truncated\n";
  for (std::size_t r = 0; r < census.cumulative.size(); ++r)
    out << r << ',' << census.cumulative[r] << ',' << census.sphere[r] << ','
        << (census.truncated ? 1 : 0) << '\n';
  return out.str();
}

std::string census_json(const BallCensus& census) {
  ordered_json j;
  j["model"] = census.model_kind;
  j["generating_set"] = census.genset_fingerprint;
  j["r_max"] = census.r_max;
  j["cumulative"] = census.cumulative;
  j["sphere"] = census.sphere;
  j["truncated"] = census.truncated;
  return dump(j);
}

std::string census_plot(const BallCensus& census) {
  std::ostringstream out;
  for (std::size_t r = 0; r < census.cumulative.size(); ++r)
    out << r << ' ' << census.cumulative[r] << '\n';
  return out.str();
}

std::string entropy_json(const EntropyReport& report) {
  ordered_json j;
  j["certified_upper"] = g12(report.certified_upper);
  j["regression_slope"] = g12(report.regression_slope);
  j["classification"] = report.classification;
  j["window"] = {report.window_lo, report.window_hi};
  j["truncated_input"] = report.truncated_input;
  return dump(j);
}

std::string screen_json(const ScreenReport& report) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json j;
    j["generator"] = e.generator;
    j["stratum"] = e.stratum;
    j["unit_circle"] = e.unit_circle;
    j["lambda_max_lo"] = q12(e.lambda_max.lo);
    j["lambda_max_hi"] = q12(e.lambda_max.hi);
    j["osin_bound"] = g12(e.osin_bound);
    arr.push_back(std::move(j));
  }
  return dump(arr);
}

std::string distortion_csv(const DistortionProfile& profile) {
  std::ostringstream out;
  out << "radius,delta,witness\n";
  for (std::size_t i = 0; i < profile.radii.size(); ++i)
    out << profile.radii[i] << ',' << profile.delta[i] << ','
        << csv_quote(profile.witness_keys[i]) << '\n';
  return out.str();
}

std::string distortion_plot(const DistortionProfile& profile) {
  std::ostringstream out;
  for (std::size_t i = 0; i < profile.radii.size(); ++i)
    out << profile.radii[i] << ' ' << profile.delta[i] << '\n';
  return out.str();
}

std::string rewrite_trace_csv(const PrefixGrowthReport& report) {
  std::ostringstream out;
  out << "input_length,s,t,conj_ops,max_intermediate\n";
  for (const auto& row : report.rows)
    out << row.length << ',' << row.s_max.get_str() << ',' << row.t_max << ','
        << row.conjugations_max << ',' << row.max_intermediate.get_str() << '\n';
  return out.str();
}

std::string fit_json(const PolynomialBoundFit& fit, const FitContext& ctx) {
  ordered_json j;
  j["degree"] = g12(fit.degree);
  j["leading_coefficient"] = g12(fit.leading_coefficient);
  j["max_residual"] = g12(fit.max_residual);
  j["window"] = {fit.window_lo, fit.window_hi};
  if (ctx.from_rewrite) {
    j["screened"] = ctx.screened;
    j["semilog_slope"] = g12(ctx.semilog_slope);
    j["seed"] = ctx.seed;
  }
  return dump(j);
}

std::string sandwich_json(const SandwichReport& report) {
  ordered_json j;
  j["kernel_order"] = report.kernel_order;
  j["checked_radius"] = report.checked_radius;
  j["ok"] = report.ok;
  j["gamma"] = report.gamma_counts;
  j["lambda"] = report.lambda_counts;
  j["violations"] = report.violations;
  return dump(j);
}

std::string closure_json(const ClosureResult& result, std::size_t cap) {
  ordered_json j;
  j["finite"] = result.finite;
  if (result.finite) j["order"] = result.order;
  j["enumerated"] = result.enumerated;
  j["cap"] = cap;
  return dump(j);
}

std::string graded_json(const GradedReport& report) {
  ordered_json j;
  j["ok"] = report.ok;
  ordered_json arr = ordered_json::array();
  for (const auto& v : report.violations) arr.push_back(v.description);
  j["violations"] = std::move(arr);
  return dump(j);
}

std::string manifest_json(const Manifest& manifest) {
  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["command"] = manifest.command;
  j["spec_file"] = manifest.spec_path;
  j["spec_sha256"] = manifest.spec_sha256;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["wall_clock_ms"] = manifest.wall_ms;
  return dump(j);
}

void write_report(const std::string& path, const std::string& content, bool force) {
  if (!force && std::filesystem::exists(path))
    throw parameter_error("refusing to overwrite '" + path +
                          "' without --force");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write '" + path + "'");
  out << content;
}

}  // namespace growthlab
