#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "growthlab/errors.hpp"
#include "growthlab/group_io.hpp"
#include "growthlab/spectra.hpp"
#include "growthlab/util.hpp"

using namespace growthlab;

namespace {

IntegerMatrix mat2(long a, long b, long c, long d) {
  IntegerMatrix m(2);
  m.at(0, 0) = a; m.at(0, 1) = b; m.at(1, 0) = c; m.at(1, 1) = d;
  return m;
}

// Floating-point eigenvalue moduli via Durand-Kerner on the characteristic
// polynomial; the independent oracle for the exact tests.
std::vector<double> eigen_moduli(const IntegerMatrix& a) {
  IntPoly p = char_poly(a);
  const std::size_t n = p.size() - 1;
  std::vector<std::complex<double>> c(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) c[i] = mpz_get_d(p[i].get_mpz_t());
  std::vector<std::complex<double>> z(n);
  std::complex<double> seed(0.4, 0.9);
  z[0] = seed;
  for (std::size_t i = 1; i < n; ++i) z[i] = z[i - 1] * seed;
  auto eval = [&](std::complex<double> x) {
    std::complex<double> acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double shift = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= z[i] - z[j];
      std::complex<double> delta = eval(z[i]) / denom;
      z[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  std::vector<double> moduli;
  for (auto& root : z) moduli.push_back(std::abs(root));
  return moduli;
}

std::vector<IntegerMatrix> random_unimodular_suite(std::size_t count,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<IntegerMatrix> out;
  while (out.size() < count) {
    const std::size_t dim = 2 + uniform_below(rng, 3);  // 2..4
    IntegerMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        m.at(i, j) = static_cast<long>(uniform_below(rng, 7)) - 3;
    mpz_class det = m.determinant();
    if (det == 1 || det == -1) out.push_back(std::move(m));
  }
  return out;
}

double to_double(const mpq_class& q) { return mpq_get_d(q.get_mpq_t()); }

}  // namespace

TEST_CASE("char_poly examples") {
  // identity 2x2 -> x^2 - 2x + 1
  CHECK(char_poly(IntegerMatrix::identity(2)) == IntPoly{1, -2, 1});
  // [[2,1],[1,1]] -> x^2 - 3x + 1, oracle = det(xI - A) = x^2 - (a+d)x + (ad-bc)
  IntegerMatrix fib = mat2(2, 1, 1, 1);
  IntPoly p = char_poly(fib);
  CHECK(p == IntPoly{1, -3, 1});
  CHECK(p[1] == -(fib.at(0, 0) + fib.at(1, 1)));
  CHECK(p[0] == fib.at(0, 0) * fib.at(1, 1) - fib.at(0, 1) * fib.at(1, 0));
  // rotation -> x^2 + 1
  CHECK(char_poly(mat2(0, -1, 1, 0)) == IntPoly{1, 0, 1});
}

TEST_CASE("char_poly properties") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 2 + uniform_below(rng, 3);
    IntegerMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        m.at(i, j) = static_cast<long>(uniform_below(rng, 11)) - 5;
    CHECK(char_poly(m) == char_poly(m.transpose()));
  }
  // block diagonal: char poly is the product of the blocks' polynomials
  IntegerMatrix block(4);
  IntegerMatrix a = mat2(2, 1, 1, 1), b = mat2(0, -1, 1, 0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      block.at(i, j) = a.at(i, j);
      block.at(2 + i, 2 + j) = b.at(i, j);
    }
  IntPoly pa = char_poly(a), pb = char_poly(b);
  IntPoly prod(pa.size() + pb.size() - 1, mpz_class(0));
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j) prod[i + j] += pa[i] * pb[j];
  CHECK(char_poly(block) == prod);
}

TEST_CASE("unit_circle_test examples") {
  CHECK(unit_circle_test(IntegerMatrix::identity(3)));
  CHECK(unit_circle_test(mat2(1, 1, 0, 1)));   // unipotent
  CHECK(unit_circle_test(mat2(0, -1, 1, 0)));  // rotation of order 4
  CHECK_FALSE(unit_circle_test(mat2(2, 1, 1, 1)));
  CHECK_FALSE(unit_circle_test(mat2(2, 0, 0, 1)));  // det = 2
}

TEST_CASE("unit_circle_test on mixed root orders") {
  // companion(Phi_3) + companion(Phi_4): orders 3 and 4, lcm 12
  IntegerMatrix m(4);
  m.at(0, 1) = -1; m.at(0, 0) = 0; m.at(1, 0) = 1; m.at(1, 1) = -1;  // x^2+x+1
  m.at(2, 3) = -1; m.at(3, 2) = 1;                                   // x^2+1
  CHECK(unit_circle_test(m));
}

TEST_CASE("lambda_max examples") {
  SUBCASE("identity -> exactly [1,1]") {
    auto enc = lambda_max(IntegerMatrix::identity(2), mpq_class(1, 1000000000));
    CHECK(enc.lo == 1);
    CHECK(enc.hi == 1);
  }
  SUBCASE("rotation -> enclosure of 1") {
    auto enc = lambda_max(mat2(0, -1, 1, 0), mpq_class(1, 1000000000));
    CHECK(enc.lo <= 1);
    CHECK(enc.hi >= 1);
    CHECK(enc.width() <= mpq_class(1, 1000000000));
  }
  SUBCASE("[[2,1],[1,1]] -> (3+sqrt(5))/2 within 1e-9") {
    const mpq_class tol(1, 1000000000);
    auto enc = lambda_max(mat2(2, 1, 1, 1), tol);
    CHECK(enc.width() <= tol);
    const double golden2 = (3.0 + std::sqrt(5.0)) / 2.0;
    CHECK(to_double(enc.lo) <= golden2);
    CHECK(to_double(enc.hi) >= golden2);
    CHECK(std::abs(to_double(enc.lo) - golden2) < 2e-9);
  }
  SUBCASE("nilpotent -> [0,0]") {
    auto enc = lambda_max(mat2(0, 1, 0, 0), mpq_class(1, 1000));
    CHECK(enc.lo == 0);
    CHECK(enc.hi == 0);
  }
  SUBCASE("bad tolerance") {
    CHECK_THROWS_AS(lambda_max(mat2(1, 0, 0, 1), mpq_class(0)), parameter_error);
  }
}

TEST_CASE("osin_lower_bound") {
  CHECK(osin_lower_bound({1, 1}) == 0.0);
  // lambda = 2: ln2 * ln2 / (6 ln2) = ln2 / 6
  CHECK(osin_lower_bound({2, 2}) == doctest::Approx(std::log(2.0) / 6.0).epsilon(1e-12));
  // lambda = (3+sqrt(5))/2: ~0.121177
  auto enc = lambda_max(mat2(2, 1, 1, 1), mpq_class(1, 1000000000));
  CHECK(osin_lower_bound(enc) == doctest::Approx(0.121177).epsilon(1e-4));
  CHECK_THROWS_AS(osin_lower_bound({mpq_class(1, 2), 1}), parameter_error);
}

TEST_CASE("osin bound is monotone and continuous at 1") {
  double prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    mpq_class l(100 + i, 100);
    double v = osin_lower_bound({l, l});
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(osin_lower_bound({mpq_class(1000001, 1000000), mpq_class(1000001, 1000000)}) <
        1e-5);
}

TEST_CASE("exact unit-circle test agrees with the float oracle on 200 matrices") {
  auto suite = random_unimodular_suite(200, 20240817);
  int compared = 0;
  for (const auto& m : suite) {
    auto moduli = eigen_moduli(m);
    double max_mod = 0;
    bool all_near_one = true;
    bool some_far = false;
    for (double v : moduli) {
      max_mod = std::max(max_mod, v);
      if (std::abs(v - 1.0) > 1e-6) all_near_one = false;
      if (v < 1.0 - 1e-3 || v > 1.0 + 1e-3) some_far = true;
    }
    const bool exact = unit_circle_test(m);
    if (all_near_one) {
      CHECK(exact);
      ++compared;
    } else if (some_far) {
      CHECK_FALSE(exact);
      ++compared;
    }
    // dead zone: excluded from the comparison

    auto enc = lambda_max(m, mpq_class(1, 1000000));
    CHECK(to_double(enc.lo) <= max_mod + 1e-5);
    CHECK(to_double(enc.hi) >= max_mod - 1e-5);
  }
  CHECK(compared >= 150);  // the dead zone should be rare
}

TEST_CASE("conjugation_matrix from fixtures") {
  auto sol = load_group_spec(std::string(GROWTHLAB_FIXTURE_DIR) + "/sol_fib.group");
  auto ext = sol.model->extension_structure();
  REQUIRE(ext.has_value());
  IntegerMatrix m = conjugation_matrix(*ext, 0, 0);  // generator t, stratum 1
  CHECK(m == mat2(2, 1, 1, 1));

  auto heis = load_group_spec(std::string(GROWTHLAB_FIXTURE_DIR) + "/heis_by_z.group");
  auto hext = heis.model->extension_structure();
  REQUIRE(hext.has_value());
  CHECK(conjugation_matrix(*hext, 0, 0) == mat2(1, 1, 0, 1));

  // torsion stratum unsupported
  auto modp = load_group_spec(std::string(GROWTHLAB_FIXTURE_DIR) + "/modp5.group");
  auto mext = modp.model->extension_structure();
  REQUIRE(mext.has_value());
  CHECK_THROWS_AS(conjugation_matrix(*mext, 0, 0), parameter_error);
}

TEST_CASE("virtual nilpotency screen") {
  SUBCASE("unipotent action passes") {
    auto heis =
        load_group_spec(std::string(GROWTHLAB_FIXTURE_DIR) + "/heis_by_z.group");
    auto report = virtual_nilpotency_screen(*heis.model->extension_structure());
    CHECK(report.pass);
    CHECK(report.conclusive);
    for (const auto& e : report.entries) CHECK(e.unit_circle);
  }
  SUBCASE("sol fails at stratum 1 with the expected bound") {
    auto sol =
        load_group_spec(std::string(GROWTHLAB_FIXTURE_DIR) + "/sol_fib.group");
    auto report = virtual_nilpotency_screen(*sol.model->extension_structure());
    CHECK_FALSE(report.pass);
    REQUIRE(report.entries.size() >= 1);
    bool found = false;
    for (const auto& e : report.entries) {
      if (e.generator == "t") {
        found = true;
        CHECK(e.stratum == 1);
        CHECK_FALSE(e.unit_circle);
        CHECK(e.osin_bound == doctest::Approx(0.121177).epsilon(1e-3));
      }
    }
    CHECK(found);
  }
  SUBCASE("finite Lambda passes vacuously") {
    // Z_2 acting trivially on Z: every Lambda generator has finite order.
    std::vector<PcGenerator> nb = {{"a", "A", std::nullopt}};
    auto n = std::make_shared<PolycyclicPresentation>(
        nb, std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
        PolycyclicPresentation::ConjugationTable{});
    std::vector<PcGenerator> lb = {{"s", "s", mpz_class(2)}};
    auto lpres = std::make_shared<PolycyclicPresentation>(
        lb, std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
        PolycyclicPresentation::ConjugationTable{});
    auto lambda = std::make_shared<PolycyclicModel>(lpres);
    std::vector<std::vector<ExpVec>> action(1);
    action[0] = {ExpVec{1}};
    auto ext = std::make_shared<SplitExtensionModel>(n, lambda, action);
    auto report = virtual_nilpotency_screen(*ext->extension_structure());
    CHECK(report.pass);
    CHECK(report.entries.empty());
    REQUIRE(report.notes.size() == 1);
    CHECK(report.notes[0].status == "finite-order");
    CHECK(report.notes[0].detail == 2);
  }
}
