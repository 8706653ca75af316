// growthlab: word growth of finitely generated groups from the command line.
// One analytic concern per subcommand; composite studies are shell scripts.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "growthlab/analytics.hpp"
#include "growthlab/ball.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/group_io.hpp"
#include "growthlab/reports.hpp"
#include "growthlab/rewriting.hpp"
#include "growthlab/sha256.hpp"
#include "growthlab/util.hpp"
#include "growthlab/spectra.hpp"

namespace gl = growthlab;

namespace {

struct RunConfig {
  std::string spec_path;
  std::size_t radius = 10;
  std::string lengths = "";
  std::size_t samples = 40;
  std::uint64_t seed = 1;
  std::size_t cap_elements = 10'000'000;
  unsigned threads = 0;
  std::string out_dir = ".";
  bool force = false;
  std::string format = "csv";
  std::string subgroup;  // comma-separated generator words for distortion
  std::size_t n_budget = 0;
};

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto pos = text.find("..");
  if (pos == std::string::npos)
    throw gl::parameter_error("bad window '" + text + "', expected a..b");
  return {std::stoul(text.substr(0, pos)), std::stoul(text.substr(pos + 2))};
}

std::string out_path(const RunConfig& cfg, const char* name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return gl::sha256_hex(buf.str());
}

class Timer {
 public:
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const Timer& timer) {
  gl::Manifest m;
  m.command = command;
  m.spec_path = cfg.spec_path;
  m.spec_sha256 = file_sha256(cfg.spec_path);
  m.seed = cfg.seed;
  m.threads = cfg.threads;
  m.wall_ms = timer.ms();
  gl::write_report(out_path(cfg, "manifest.json"), gl::manifest_json(m), true);
}

gl::BallOptions ball_options(const RunConfig& cfg) {
  gl::BallOptions opts;
  opts.cap_elements = cfg.cap_elements;
  opts.threads = cfg.threads;
  return opts;
}

gl::Rewriter make_rewriter(const gl::ModelPtr& model) {
  auto ext = model->extension_structure();
  if (!ext)
    throw gl::parameter_error(
        "this subcommand needs a model with an extension structure "
        "(split_extension or mod_p_extension)");
  return gl::Rewriter(std::move(*ext));
}

int run_ball(const RunConfig& cfg, bool with_entropy, bool with_fit) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  gl::Ball ball = gl::enumerate_ball(loaded.model, cfg.radius, ball_options(cfg));
  gl::BallCensus census = ball.census();
  gl::write_report(out_path(cfg, "census.csv"), gl::census_csv(census), cfg.force);
  gl::write_report(out_path(cfg, "census.dat"), gl::census_plot(census), cfg.force);
  if (cfg.format == "json")
    gl::write_report(out_path(cfg, "census.json"), gl::census_json(census),
                     cfg.force);

  if (with_entropy) {
    gl::EntropyReport report = gl::entropy_report(census);
    gl::write_report(out_path(cfg, "entropy.json"), gl::entropy_json(report),
                     cfg.force);
    std::cout << "entropy: certified_upper=" << gl::format_g12(report.certified_upper)
              << " classification=" << report.classification << "\n";
  }
  if (with_fit) {
    std::size_t lo = std::max<std::size_t>(1, (census.cumulative.size() - 1) / 2);
    std::size_t hi = census.cumulative.size() - 1;
    if (!cfg.lengths.empty()) std::tie(lo, hi) = parse_range(cfg.lengths);
    std::vector<double> values(census.cumulative.size());
    for (std::size_t r = 0; r < census.cumulative.size(); ++r)
      values[r] = static_cast<double>(census.cumulative[r]);
    gl::PolynomialBoundFit fit = gl::fit_polynomial_degree(values, lo, hi);
    gl::write_report(out_path(cfg, "fit.json"), gl::fit_json(fit), cfg.force);
    std::cout << "fit: degree=" << gl::format_g12(fit.degree) << "\n";
  }

  write_manifest(cfg, with_entropy ? "entropy" : (with_fit ? "fit" : "ball"), timer);
  std::cout << "census: radius=" << census.cumulative.size() - 1 << "/" << cfg.radius
            << " elements=" << census.cumulative.back()
            << (census.truncated ? " (truncated)" : "") << "\n";
  return census.truncated ? 3 : 0;
}

int run_distortion(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  std::vector<gl::Element> gens;
  if (!cfg.subgroup.empty()) {
    std::stringstream in(cfg.subgroup);
    std::string word_text;
    while (std::getline(in, word_text, ','))
      gens.push_back(loaded.model->evaluate_word(
          gl::parse_word(loaded.model->gens(), word_text)));
  } else if (auto ext = loaded.model->extension_structure()) {
    for (std::size_t b = 0; b < ext->n_basis->rank(); ++b)
      gens.push_back(
          loaded.model->generator_image(ext->ambient_gen_of_basis[b]));
  } else {
    throw gl::parameter_error(
        "distortion: pass --subgroup words or use a model with a natural N");
  }

  gl::DistortionOptions opts;
  opts.ball = ball_options(cfg);
  opts.n_radius_budget = cfg.n_budget;
  gl::DistortionProfile profile =
      gl::distortion_profile(loaded.model, gens, cfg.radius, opts);
  gl::write_report(out_path(cfg, "distortion.csv"), gl::distortion_csv(profile),
                   cfg.force);
  gl::write_report(out_path(cfg, "distortion.dat"), gl::distortion_plot(profile),
                   cfg.force);

  std::size_t hi = profile.radii.empty() ? 0 : profile.radii.back();
  std::size_t lo = std::max<std::size_t>(1, hi / 2);
  if (!cfg.lengths.empty()) std::tie(lo, hi) = parse_range(cfg.lengths);
  std::vector<double> values(profile.delta.size());
  for (std::size_t i = 0; i < profile.delta.size(); ++i)
    values[i] = static_cast<double>(profile.delta[i]);
  gl::PolynomialBoundFit fit = gl::fit_polynomial_degree(values, lo, hi);
  gl::FitContext ctx;
  ctx.from_rewrite = true;
  ctx.screened = false;
  ctx.semilog_slope = gl::semilog_slope(values, lo, hi);
  ctx.seed = cfg.seed;
  gl::write_report(out_path(cfg, "fit.json"), gl::fit_json(fit, ctx), cfg.force);

  write_manifest(cfg, "distortion", timer);
  std::cout << "distortion: delta(" << profile.radii.back()
            << ")=" << profile.delta.back()
            << " degree=" << gl::format_g12(fit.degree)
            << (profile.n_ball_open ? " (subgroup enumeration open)" : "") << "\n";
  return profile.truncated ? 3 : 0;
}

int run_closure(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  gl::ClosureResult result =
      gl::enumerate_closure(loaded.model, cfg.cap_elements, ball_options(cfg));
  gl::write_report(out_path(cfg, "closure.json"),
                   gl::closure_json(result, cfg.cap_elements), cfg.force);
  write_manifest(cfg, "closure", timer);
  if (result.finite)
    std::cout << "closure: finite group of order " << result.order << "\n";
  else
    std::cout << "closure: cap exceeded after " << result.enumerated
              << " elements\n";
  return 0;
}

int run_screen(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  gl::Rewriter rewriter = make_rewriter(loaded.model);
  gl::ScreenReport report = gl::virtual_nilpotency_screen(rewriter.structure());
  gl::write_report(out_path(cfg, "screen.json"), gl::screen_json(report), cfg.force);
  write_manifest(cfg, "screen", timer);
  std::cout << "screen: " << (report.pass ? "pass" : "fail")
            << (report.conclusive ? "" : " (inconclusive: order unknown)") << "\n";
  for (const auto& e : report.entries)
    if (!e.unit_circle)
      std::cout << "  " << e.generator << " stratum " << e.stratum
                << ": lambda_max in ["
                << gl::format_g12(mpq_get_d(e.lambda_max.lo.get_mpq_t())) << ", "
                << gl::format_g12(mpq_get_d(e.lambda_max.hi.get_mpq_t()))
                << "], entropy lower bound "
                << gl::format_g12(e.osin_bound) << "\n";
  return 0;
}

int run_rewrite(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  gl::Rewriter rewriter = make_rewriter(loaded.model);
  gl::PrefixGrowthOptions opts;
  if (!cfg.lengths.empty())
    std::tie(opts.min_length, opts.max_length) = parse_range(cfg.lengths);
  opts.samples = cfg.samples;
  opts.seed = cfg.seed;
  gl::PrefixGrowthReport report = gl::measure_prefix_growth(rewriter, opts);
  gl::write_report(out_path(cfg, "rewrite_trace.csv"),
                   gl::rewrite_trace_csv(report), cfg.force);
  gl::FitContext ctx;
  ctx.from_rewrite = true;
  ctx.screened = report.screened;
  ctx.semilog_slope = report.semilog_slope;
  ctx.seed = cfg.seed;
  gl::write_report(out_path(cfg, "fit.json"), gl::fit_json(report.fit, ctx),
                   cfg.force);
  gl::write_report(out_path(cfg, "screen.json"), gl::screen_json(report.screen),
                   cfg.force);
  write_manifest(cfg, "rewrite", timer);
  std::cout << "rewrite: " << (report.screened ? "screened" : "unscreened")
            << " degree=" << gl::format_g12(report.fit.degree)
            << " semilog_slope=" << gl::format_g12(report.semilog_slope) << "\n";
  return 0;
}

int run_sandwich(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path);
  gl::SandwichReport report =
      gl::quotient_sandwich_check(loaded.model, cfg.radius, ball_options(cfg));
  gl::write_report(out_path(cfg, "sandwich.json"), gl::sandwich_json(report),
                   cfg.force);
  write_manifest(cfg, "sandwich", timer);
  std::cout << "sandwich: " << (report.ok ? "holds" : "VIOLATED")
            << " up to radius " << report.checked_radius << " (|F|="
            << report.kernel_order << ")\n";
  return report.ok ? 0 : 1;
}

int run_verify(const RunConfig& cfg) {
  Timer timer;
  auto loaded = gl::load_group_spec(cfg.spec_path, /*strict=*/false);
  gl::write_report(out_path(cfg, "verify.json"), gl::graded_json(loaded.graded),
                   cfg.force);
  write_manifest(cfg, "verify", timer);
  if (loaded.graded.ok) {
    std::cout << "verify: ok (" << loaded.model->kind() << ", "
              << loaded.model->gens()->size() << " generators)\n";
    return 0;
  }
  std::cout << "verify: graded series violated\n";
  for (const auto& v : loaded.graded.violations)
    std::cout << "  " << v.description << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growthlab: executable growth theory of finitely generated groups"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub, bool with_radius) {
    sub->add_option("spec", cfg.spec_path, "group spec file (.group)")
        ->required()
        ->check(CLI::ExistingFile);
    if (with_radius)
      sub->add_option("--radius", cfg.radius, "ball radius");
    sub->add_option("--lengths", cfg.lengths, "window a..b");
    sub->add_option("--samples", cfg.samples, "random words per length");
    sub->add_option("--seed", cfg.seed, "random seed (recorded in reports)");
    sub->add_option("--cap-elements", cfg.cap_elements, "stored element cap");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    sub->add_option("-o,--out", cfg.out_dir, "output directory")
        ->check(CLI::ExistingDirectory);
    sub->add_flag("--force", cfg.force, "overwrite existing reports");
    sub->add_option("--format", cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* ball = app.add_subcommand("ball", "enumerate a word-metric ball");
  add_common(ball, true);
  auto* entropy = app.add_subcommand("entropy", "ball census plus entropy report");
  add_common(entropy, true);
  auto* fit = app.add_subcommand("fit", "ball census plus polynomial-degree fit");
  add_common(fit, true);
  auto* distortion = app.add_subcommand("distortion", "subgroup distortion profile");
  add_common(distortion, true);
  distortion->add_option("--subgroup", cfg.subgroup,
                         "comma-separated generator words for N");
  distortion->add_option("--n-budget", cfg.n_budget,
                         "radius budget for the subgroup metric (0 = auto)");
  auto* closure = app.add_subcommand("closure", "enumerate until closure or cap");
  add_common(closure, false);
  auto* screen = app.add_subcommand("screen", "eigenvalue norm-one screen");
  add_common(screen, false);
  auto* rewrite = app.add_subcommand("rewrite", "prefix-growth instrumentation");
  add_common(rewrite, false);
  auto* sandwich = app.add_subcommand("sandwich", "finite-kernel census sandwich");
  add_common(sandwich, true);
  auto* verify = app.add_subcommand("verify", "validate a group spec");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  }

  try {
    if (ball->parsed()) return run_ball(cfg, false, false);
    if (entropy->parsed()) return run_ball(cfg, true, false);
    if (fit->parsed()) return run_ball(cfg, false, true);
    if (distortion->parsed()) return run_distortion(cfg);
    if (closure->parsed()) return run_closure(cfg);
    if (screen->parsed()) return run_screen(cfg);
    if (rewrite->parsed()) return run_rewrite(cfg);
    if (sandwich->parsed()) return run_sandwich(cfg);
    if (verify->parsed()) return run_verify(cfg);
  } catch (const gl::resource_error& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 3;
  } catch (const gl::parameter_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const gl::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
