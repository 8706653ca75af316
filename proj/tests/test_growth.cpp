#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "growthlab/analytics.hpp"
#include "growthlab/ball.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/group_io.hpp"
#include "growthlab/util.hpp"

using namespace growthlab;

namespace {

std::string fixture(const char* name) {
  return std::string(GROWTHLAB_FIXTURE_DIR) + "/" + name;
}

ModelPtr load(const char* name) { return load_group_spec(fixture(name)).model; }

// closed form for the free group of rank 2: c(R) = 2*3^R - 1
std::size_t free2_count(std::size_t r) {
  std::size_t p = 1;
  for (std::size_t i = 0; i < r; ++i) p *= 3;
  return 2 * p - 1;
}

ModelPtr trivial_model() {
  auto set = SymmetricGeneratingSet::create({"e"}, {0});
  return std::make_shared<MatrixGroupModel>(
      set, std::vector<RationalMatrix>{RationalMatrix::identity(1)});
}

ModelPtr z_model() {
  std::vector<PcGenerator> basis = {{"t", "T", std::nullopt}};
  auto pres = std::make_shared<PolycyclicPresentation>(
      basis, std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
      PolycyclicPresentation::ConjugationTable{});
  return std::make_shared<PolycyclicModel>(pres);
}

std::vector<double> to_doubles(const std::vector<std::size_t>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<double>(v[i]);
  return out;
}

}  // namespace

TEST_CASE("ball of radius zero") {
  auto ball = enumerate_ball(trivial_model(), 0);
  CHECK(ball.cumulative() == std::vector<std::size_t>{1});
}

TEST_CASE("zero generators: c(R) = 1 for every R") {
  auto pres = std::make_shared<PolycyclicPresentation>(
      std::vector<PcGenerator>{},
      std::vector<std::pair<std::size_t, std::size_t>>{},
      PolycyclicPresentation::ConjugationTable{});
  auto model = std::make_shared<PolycyclicModel>(pres);
  auto census = enumerate_ball(model, 7).census();
  CHECK(census.cumulative == std::vector<std::size_t>(8, 1));
}

TEST_CASE("entropy on a truncated census uses the exact prefix") {
  auto model = load("free2.group");
  BallOptions opts;
  opts.cap_elements = 200;  // truncates between radius 4 (161) and 5 (485)
  auto census = enumerate_ball(model, 8, opts).census();
  REQUIRE(census.truncated);
  auto report = entropy_report(census);
  CHECK(report.truncated_input);
  CHECK(report.window_hi == 4);
}

TEST_CASE("free group census matches the closed form") {
  auto model = load("free2.group");
  auto ball = enumerate_ball(model, 8);
  REQUIRE(ball.completed_radius() == 8);
  for (std::size_t r = 0; r <= 8; ++r) CHECK(ball.cumulative()[r] == free2_count(r));
  CHECK_FALSE(ball.truncated());
}

TEST_CASE("census determinism across thread counts") {
  auto model = load("free2.group");
  BallOptions one, eight;
  one.threads = 1;
  eight.threads = 8;
  auto b1 = enumerate_ball(model, 6, one);
  auto b8 = enumerate_ball(model, 6, eight);
  CHECK(b1.cumulative() == b8.cumulative());
  // identical enumeration order, not only identical counts
  REQUIRE(b1.size() == b8.size());
  for (std::size_t i = 0; i < b1.size(); ++i)
    CHECK(model->canonical_key(b1.element(i)) == model->canonical_key(b8.element(i)));
}

TEST_CASE("census invariants: symmetry and submultiplicativity") {
  for (const char* name : {"heisenberg.group", "modp5.group", "z_cross_z2.group"}) {
    auto model = load(name);
    auto ball = enumerate_ball(model, 6);
    const auto& c = ball.cumulative();
    CHECK(c[0] == 1);
    for (std::size_t r = 1; r < c.size(); ++r) CHECK(c[r] >= c[r - 1]);
    // every element's inverse sits at the same radius
    for (std::size_t i = 0; i < ball.size(); ++i) {
      auto inv = ball.find(model->canonical_key(model->inverse(ball.element(i))));
      REQUIRE(inv.has_value());
      CHECK(ball.radius(*inv) == ball.radius(i));
    }
    // submultiplicativity c(r+s) <= c(r) c(s)
    for (std::size_t r = 0; r < c.size(); ++r)
      for (std::size_t s = 0; r + s < c.size(); ++s)
        CHECK(c[r + s] <= c[r] * c[s]);
  }
}

TEST_CASE("truncation is reported at the last complete radius") {
  auto model = load("free2.group");
  BallOptions opts;
  opts.cap_elements = 100;  // 4 + 1 elements at r=1, 17 at 2, 53 at 3, 161 > 100
  auto ball = enumerate_ball(model, 8, opts);
  CHECK(ball.truncated());
  CHECK(ball.completed_radius() == 3);
  CHECK(ball.cumulative().back() == free2_count(3));
}

TEST_CASE("element_length examples") {
  auto model = load("heisenberg.group");
  CHECK(element_length(model, model->identity(), 3) == 0);
  CHECK(element_length(model, model->generator_image(0), 3) == 1);
  // z = [x,y] has length 4
  Element z = model->evaluate_word(parse_word(model->gens(), "x y x^-1 y^-1"));
  CHECK(element_length(model, z, 4) == 4);
  // not-in-ball is a signal, not an error
  Element z5 = model_power(*model, z, 5);
  CHECK_FALSE(element_length(model, z5, 3).has_value());
}

TEST_CASE("element_length satisfies the triangle inequality") {
  auto model = load("heisenberg.group");
  auto ball = enumerate_ball(model, 8);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t i = uniform_below(rng, ball.size());
    std::size_t j = uniform_below(rng, ball.size());
    if (ball.radius(i) + ball.radius(j) > 8) continue;
    Element prod = model->multiply(ball.element(i), ball.element(j));
    auto idx = ball.find(model->canonical_key(prod));
    REQUIRE(idx.has_value());
    CHECK(ball.radius(*idx) <= ball.radius(i) + ball.radius(j));
  }
}

TEST_CASE("mod-p census: spheres eventually constant (linear growth)") {
  auto model = load("modp5.group");
  auto ball = enumerate_ball(model, 12);
  // independent oracle: exhaustive enumeration over the reachable (a, n) box
  std::set<std::pair<long, long>> reachable{{0, 0}};
  std::vector<std::size_t> counts{1};
  std::set<std::pair<long, long>> frontier = reachable;
  auto step = [&](std::pair<long, long> e, int g) -> std::pair<long, long> {
    auto [a, n] = e;
    auto pow2 = [](long n2) {
      long r = ((n2 % 4) + 4) % 4;  // order of 2 mod 5 is 4
      long v = 1;
      for (long i = 0; i < r; ++i) v = (v * 2) % 5;
      return v;
    };
    switch (g) {
      case 0: return {(a + pow2(n)) % 5, n};            // * alpha
      case 1: return {(a + pow2(n) * 4) % 5, n};        // * alpha^-1
      case 2: return {a, n + 1};                        // * gamma
      default: return {a, n - 1};                       // * gamma^-1
    }
  };
  for (int r = 1; r <= 12; ++r) {
    std::set<std::pair<long, long>> next;
    for (auto e : frontier)
      for (int g = 0; g < 4; ++g) {
        auto ne = step(e, g);
        if (!reachable.count(ne)) next.insert(ne);
      }
    for (auto e : next) reachable.insert(e);
    frontier = std::move(next);
    counts.push_back(reachable.size());
  }
  for (std::size_t r = 0; r <= 12; ++r) CHECK(ball.cumulative()[r] == counts[r]);
  // spheres settle to the constant 10 = 2 shifts * 5 residues
  auto census = ball.census();
  CHECK(census.sphere[11] == census.sphere[12]);
}

TEST_CASE("entropy report examples") {
  SUBCASE("trivial group: zero entropy, polynomial-consistent") {
    // the closed ball's census is constant out to the requested radius
    auto report = entropy_report(enumerate_ball(trivial_model(), 10).census());
    CHECK(report.certified_upper == 0.0);
    CHECK(report.classification == "polynomial-consistent");
  }
  SUBCASE("free group to radius 10: certified upper ~ 1.168, exponential") {
    auto model = load("free2.group");
    auto report = entropy_report(enumerate_ball(model, 10).census());
    CHECK(report.certified_upper ==
          doctest::Approx(std::log(2 * std::pow(3.0, 10) - 1) / 10).epsilon(1e-9));
    CHECK(report.certified_upper == doctest::Approx(1.168).epsilon(1e-3));
    CHECK(report.classification == "exponential-consistent");
  }
  SUBCASE("Z with two generators: polynomial-consistent, below 0.35 by R=10") {
    auto report = entropy_report(enumerate_ball(z_model(), 10).census());
    CHECK(report.certified_upper == doctest::Approx(std::log(21.0) / 10).epsilon(1e-9));
    CHECK(report.certified_upper < 0.35);
    CHECK(report.classification == "polynomial-consistent");
  }
  SUBCASE("certified upper bound never increases with radius") {
    auto model = load("free2.group");
    double prev = 1e9;
    for (std::size_t r = 4; r <= 10; r += 2) {
      auto report = entropy_report(enumerate_ball(model, r).census());
      CHECK(report.certified_upper <= prev + 1e-12);
      prev = report.certified_upper;
    }
  }
  SUBCASE("too-short census is a parameter error") {
    CHECK_THROWS_AS(entropy_report(enumerate_ball(z_model(), 3).census()),
                    parameter_error);
  }
}

TEST_CASE("fekete: the minimizing radius is the largest for free groups") {
  auto model = load("free2.group");
  auto ball = enumerate_ball(model, 8);
  const auto& c = ball.cumulative();
  double best = 1e18;
  std::size_t best_r = 0;
  for (std::size_t r = 3; r <= 8; ++r) {
    double v = std::log(static_cast<double>(c[r])) / r;
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  CHECK(best_r == 8);
}

TEST_CASE("fit_polynomial_degree") {
  SUBCASE("exact quadratic") {
    std::vector<double> f(21, 0.0);
    for (std::size_t r = 1; r <= 20; ++r) f[r] = static_cast<double>(r * r);
    auto fit = fit_polynomial_degree(f, 5, 20);
    CHECK(fit.degree == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.leading_coefficient == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.max_residual < 1e-9);
  }
  SUBCASE("heisenberg census degree lands near 4") {
    auto model = load("heisenberg.group");
    auto ball = enumerate_ball(model, 12);
    auto fit = fit_polynomial_degree(to_doubles(ball.cumulative()), 6, 12);
    CHECK(fit.degree > 2.5);
    CHECK(fit.degree < 4.5);
  }
  SUBCASE("mod-p census degree is near 1") {
    auto model = load("modp5.group");
    auto ball = enumerate_ball(model, 12);
    auto fit = fit_polynomial_degree(to_doubles(ball.cumulative()), 6, 12);
    CHECK(fit.degree > 0.8);
    CHECK(fit.degree < 1.2);
  }
  SUBCASE("degenerate window") {
    std::vector<double> f{1, 2, 3};
    CHECK_THROWS_AS(fit_polynomial_degree(f, 1, 2), parameter_error);
  }
}

TEST_CASE("closure enumeration") {
  SUBCASE("trivial group has order 1") {
    auto result = enumerate_closure(trivial_model(), 10);
    CHECK(result.finite);
    CHECK(result.order == 1);
  }
  SUBCASE("unitriangular matrices mod 3 have order 27") {
    auto model = load("heis_mod3.group");
    auto result = enumerate_closure(model, 1000);
    CHECK(result.finite);
    CHECK(result.order == 27);
  }
  SUBCASE("the integral Heisenberg group exceeds any cap") {
    auto model = load("heisenberg.group");
    auto result = enumerate_closure(model, 5000);
    CHECK_FALSE(result.finite);
  }
}

TEST_CASE("quotient sandwich") {
  SUBCASE("trivial kernel gives equality") {
    // N = trivial polycyclic group, Lambda = Z
    std::vector<PcGenerator> nb = {{"u", "u", mpz_class(2)}};
    auto npres = std::make_shared<PolycyclicPresentation>(
        nb, std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
        PolycyclicPresentation::ConjugationTable{});
    // kernel {e, u} has order 2, so use the z_cross_z2 fixture for ratio 2
    auto model = load("z_cross_z2.group");
    auto report = quotient_sandwich_check(model, 10);
    CHECK(report.ok);
    CHECK(report.kernel_order == 2);
    for (std::size_t r = 0; r <= report.checked_radius; ++r) {
      CHECK(report.lambda_counts[r] <= report.gamma_counts[r]);
      CHECK(report.gamma_counts[r] <= 2 * report.lambda_counts[r]);
    }
    // oracle: |Gamma(R)| = 4R for R >= 1, |Lambda(R)| = 2R+1
    for (std::size_t r = 1; r <= report.checked_radius; ++r) {
      CHECK(report.gamma_counts[r] == 4 * r);
      CHECK(report.lambda_counts[r] == 2 * r + 1);
    }
  }
  SUBCASE("mod-p quotient onto Z") {
    auto model = load("modp5.group");
    auto report = quotient_sandwich_check(model, 10);
    CHECK(report.ok);
    CHECK(report.kernel_order == 5);
    for (std::size_t r = 1; r <= report.checked_radius; ++r)
      CHECK(report.lambda_counts[r] == 2 * r + 1);
  }
  SUBCASE("matrix models have no quotient map") {
    CHECK_THROWS_AS(quotient_sandwich_check(load("heisenberg.group"), 4),
                    parameter_error);
  }
}

TEST_CASE("distortion profiles") {
  SUBCASE("N = Gamma gives the identity profile") {
    auto model = load("z_cross_z2.group");
    std::vector<Element> gens;
    for (std::size_t i = 0; i < model->gens()->size(); ++i)
      gens.push_back(model->generator_image(i));
    auto profile = distortion_profile(model, gens, 8);
    for (std::size_t r = 0; r < profile.radii.size(); ++r)
      CHECK(profile.delta[r] == r);
  }
  SUBCASE("central z inside the Heisenberg group is quadratically distorted") {
    auto model = load("heisenberg.group");
    Element z = model->evaluate_word(parse_word(model->gens(), "x y x^-1 y^-1"));
    auto profile = distortion_profile(model, {z}, 12);
    // oracle: z^k has ambient length ~ 4 sqrt(k); delta(12) = floor(144/16) = 9
    CHECK(profile.delta[12] == 9);
    CHECK(profile.delta[8] == 4);
    // monotone
    for (std::size_t r = 1; r < profile.delta.size(); ++r)
      CHECK(profile.delta[r] >= profile.delta[r - 1]);
    auto fit = fit_polynomial_degree(to_doubles(profile.delta), 6, 12);
    CHECK(fit.degree > 1.5);
    CHECK(fit.degree < 2.5);
  }
  SUBCASE("Z^2 inside sol is exponentially distorted") {
    auto model = load("sol_fib.group");
    std::vector<Element> gens = {model->generator_image(0),
                                 model->generator_image(2)};
    DistortionOptions opts;
    opts.n_radius_budget = 200;
    auto profile = distortion_profile(model, gens, 9, opts);
    double slope = semilog_slope(to_doubles(profile.delta), 3, 9);
    CHECK(slope > 0.3);
  }
}
