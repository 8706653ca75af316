#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "growthlab/analytics.hpp"
#include "growthlab/ball.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/group_io.hpp"
#include "growthlab/reports.hpp"
#include "growthlab/rewriting.hpp"
#include "growthlab/spectra.hpp"

namespace py = pybind11;
using namespace growthlab;

namespace {

py::object big_int(const std::string& digits) {
  return py::module_::import("builtins").attr("int")(digits);
}

IntegerMatrix matrix_from(const std::vector<std::vector<long long>>& rows) {
  const std::size_t dim = rows.size();
  IntegerMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (rows[i].size() != dim)
      throw parameter_error("matrix rows must form a square matrix");
    for (std::size_t j = 0; j < dim; ++j)
      m.at(i, j) = mpz_class(std::to_string(rows[i][j]));
  }
  return m;
}

/// Thin facade over a loaded group model for the python surface.
class Group {
 public:
  explicit Group(const std::string& path) : loaded_(load_group_spec(path)) {}

  std::string kind() const { return loaded_.model->kind(); }

  std::vector<std::string> generators() const {
    return loaded_.model->gens()->labels();
  }

  bool graded_ok() const { return loaded_.graded.ok; }

  std::string evaluate_key(const std::string& word) const {
    const auto& m = *loaded_.model;
    return m.canonical_key(m.evaluate_word(parse_word(m.gens(), word)));
  }

  std::string reduce(const std::string& word) const {
    return format_word(free_reduce(parse_word(loaded_.model->gens(), word)));
  }

  py::dict ball(std::size_t radius, std::size_t cap, unsigned threads) const {
    BallOptions opts;
    opts.cap_elements = cap;
    opts.threads = threads;
    Ball b = enumerate_ball(loaded_.model, radius, opts);
    BallCensus census = b.census();
    py::dict out;
    out["cumulative"] = census.cumulative;
    out["sphere"] = census.sphere;
    out["truncated"] = census.truncated;
    return out;
  }

  py::dict entropy(std::size_t radius) const {
    EntropyReport report =
        entropy_report(enumerate_ball(loaded_.model, radius).census());
    py::dict out;
    out["certified_upper"] = report.certified_upper;
    out["regression_slope"] = report.regression_slope;
    out["classification"] = report.classification;
    out["window"] = py::make_tuple(report.window_lo, report.window_hi);
    return out;
  }

  py::dict fit(std::size_t radius, std::size_t lo, std::size_t hi) const {
    Ball b = enumerate_ball(loaded_.model, radius);
    std::vector<double> values;
    for (auto c : b.cumulative()) values.push_back(static_cast<double>(c));
    PolynomialBoundFit f = fit_polynomial_degree(values, lo, hi);
    py::dict out;
    out["degree"] = f.degree;
    out["leading_coefficient"] = f.leading_coefficient;
    out["max_residual"] = f.max_residual;
    return out;
  }

  py::object element_length(const std::string& word, std::size_t budget) const {
    const auto& m = *loaded_.model;
    auto length = growthlab::element_length(
        loaded_.model, m.evaluate_word(parse_word(m.gens(), word)), budget);
    if (!length) return py::none();
    return py::cast(*length);
  }

  py::dict closure(std::size_t cap) const {
    ClosureResult result = enumerate_closure(loaded_.model, cap);
    py::dict out;
    out["finite"] = result.finite;
    out["enumerated"] = result.enumerated;
    if (result.finite) out["order"] = result.order;
    return out;
  }

  py::list screen() const {
    auto ext = loaded_.model->extension_structure();
    if (!ext) throw parameter_error("screen needs an extension model");
    ScreenReport report = virtual_nilpotency_screen(*ext);
    py::list entries;
    for (const auto& e : report.entries) {
      py::dict d;
      d["generator"] = e.generator;
      d["stratum"] = e.stratum;
      d["unit_circle"] = e.unit_circle;
      d["lambda_max_lo"] = mpq_get_d(e.lambda_max.lo.get_mpq_t());
      d["lambda_max_hi"] = mpq_get_d(e.lambda_max.hi.get_mpq_t());
      d["osin_bound"] = e.osin_bound;
      entries.append(std::move(d));
    }
    return entries;
  }

  py::dict sandwich(std::size_t radius) const {
    SandwichReport report = quotient_sandwich_check(loaded_.model, radius);
    py::dict out;
    out["ok"] = report.ok;
    out["kernel_order"] = report.kernel_order;
    out["gamma"] = report.gamma_counts;
    out["lambda"] = report.lambda_counts;
    return out;
  }

  py::dict distortion(std::size_t radius, const std::vector<std::string>& subgroup,
                      std::size_t n_budget) const {
    std::vector<Element> gens;
    if (!subgroup.empty()) {
      for (const auto& text : subgroup)
        gens.push_back(loaded_.model->evaluate_word(
            parse_word(loaded_.model->gens(), text)));
    } else if (auto ext = loaded_.model->extension_structure()) {
      for (std::size_t b = 0; b < ext->n_basis->rank(); ++b)
        gens.push_back(
            loaded_.model->generator_image(ext->ambient_gen_of_basis[b]));
    } else {
      throw parameter_error("distortion needs subgroup words or a natural N");
    }
    DistortionOptions opts;
    opts.n_radius_budget = n_budget;
    DistortionProfile profile =
        distortion_profile(loaded_.model, gens, radius, opts);
    py::dict out;
    out["radii"] = profile.radii;
    out["delta"] = profile.delta;
    out["members"] = profile.members;
    out["n_ball_open"] = profile.n_ball_open;
    return out;
  }

  py::dict prefix_growth(std::size_t min_length, std::size_t max_length,
                         std::size_t samples, std::uint64_t seed) const {
    auto ext = loaded_.model->extension_structure();
    if (!ext) throw parameter_error("prefix_growth needs an extension model");
    Rewriter rewriter(std::move(*ext));
    PrefixGrowthOptions opts;
    opts.min_length = min_length;
    opts.max_length = max_length;
    opts.samples = samples;
    opts.seed = seed;
    PrefixGrowthReport report = measure_prefix_growth(rewriter, opts);
    py::dict out;
    out["screened"] = report.screened;
    out["degree"] = report.fit.degree;
    out["semilog_slope"] = report.semilog_slope;
    py::list rows;
    for (const auto& row : report.rows) {
      py::dict d;
      d["length"] = row.length;
      d["s_max"] = big_int(row.s_max.get_str());
      d["t_max"] = row.t_max;
      rows.append(std::move(d));
    }
    out["rows"] = std::move(rows);
    return out;
  }

 private:
  LoadedGroup loaded_;
};

}  // namespace

PYBIND11_MODULE(_growthlab, m) {
  m.doc() = "Word growth of finitely generated groups: censuses, entropy "
            "bounds, collection, and spectral screens.";

  // translators run last-registered-first: the base goes in first so the
  // derived parameter_error is matched before it
  py::register_exception<error>(m, "GrowthlabError", PyExc_RuntimeError);
  py::register_exception<parameter_error>(m, "ParameterError", PyExc_ValueError);

  py::class_<Group>(m, "Group", "A validated group model loaded from a .group spec")
      .def(py::init<const std::string&>(), py::arg("path"))
      .def("kind", &Group::kind)
      .def("generators", &Group::generators)
      .def("graded_ok", &Group::graded_ok)
      .def("evaluate_key", &Group::evaluate_key, py::arg("word"),
           "Canonical key of the word's image; equal elements share keys")
      .def("reduce", &Group::reduce, py::arg("word"))
      .def("ball", &Group::ball, py::arg("radius"),
           py::arg("cap") = std::size_t(10'000'000), py::arg("threads") = 0u)
      .def("entropy", &Group::entropy, py::arg("radius"))
      .def("fit", &Group::fit, py::arg("radius"), py::arg("window_lo"),
           py::arg("window_hi"))
      .def("element_length", &Group::element_length, py::arg("word"),
           py::arg("budget"))
      .def("closure", &Group::closure, py::arg("cap"))
      .def("screen", &Group::screen)
      .def("sandwich", &Group::sandwich, py::arg("radius"))
      .def("distortion", &Group::distortion, py::arg("radius"),
           py::arg("subgroup") = std::vector<std::string>{},
           py::arg("n_budget") = std::size_t(0))
      .def("prefix_growth", &Group::prefix_growth, py::arg("min_length") = 5,
           py::arg("max_length") = 40, py::arg("samples") = 40,
           py::arg("seed") = 1);

  m.def("load", [](const std::string& path) { return Group(path); },
        py::arg("path"), "Load and validate a .group spec");

  m.def(
      "char_poly",
      [](const std::vector<std::vector<long long>>& rows) {
        IntPoly p = char_poly(matrix_from(rows));
        py::list out;
        for (const auto& c : p) out.append(big_int(c.get_str()));
        return out;
      },
      py::arg("matrix"), "Exact characteristic polynomial, ascending coefficients");

  m.def(
      "unit_circle_test",
      [](const std::vector<std::vector<long long>>& rows) {
        return unit_circle_test(matrix_from(rows));
      },
      py::arg("matrix"),
      "Exact test that every eigenvalue has modulus one (roots of unity)");

  m.def(
      "lambda_max",
      [](const std::vector<std::vector<long long>>& rows, double tol) {
        RationalInterval enc = lambda_max(matrix_from(rows), mpq_class(tol));
        return py::make_tuple(mpq_get_d(enc.lo.get_mpq_t()),
                              mpq_get_d(enc.hi.get_mpq_t()));
      },
      py::arg("matrix"), py::arg("tol") = 1e-9,
      "Rational enclosure of the maximal eigenvalue modulus");

  m.def(
      "osin_lower_bound",
      [](double lam) {
        mpq_class q(lam);
        return osin_lower_bound({q, q});
      },
      py::arg("lambda_max"),
      "Entropy lower bound ln2 ln(l) / (ln2 + 5 ln(l)) for Z^k x| Z");

#ifdef GROWTHLAB_VERSION
  m.attr("__version__") = GROWTHLAB_VERSION;
#else
  m.attr("__version__") = kToolVersion;
#endif
}
