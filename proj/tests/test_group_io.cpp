#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "growthlab/errors.hpp"
#include "growthlab/group_io.hpp"

using namespace growthlab;

namespace {
std::string fixture(const char* name) {
  return std::string(GROWTHLAB_FIXTURE_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("bundled fixtures load and validate") {
  SUBCASE("heisenberg: matrix model with 4 symmetric generators") {
    auto loaded = load_group_spec(fixture("heisenberg.group"));
    CHECK(loaded.model->kind() == "matrix");
    CHECK(loaded.model->gens()->size() == 4);
    CHECK(loaded.graded.ok);
  }
  SUBCASE("free2: matrix model") {
    auto loaded = load_group_spec(fixture("free2.group"));
    CHECK(loaded.model->kind() == "matrix");
    CHECK(loaded.model->gens()->size() == 4);
  }
  SUBCASE("sol_fib: split extension") {
    auto loaded = load_group_spec(fixture("sol_fib.group"));
    CHECK(loaded.model->kind() == "split_extension");
    CHECK(loaded.model->gens()->size() == 6);
    CHECK(loaded.graded.ok);
    CHECK(loaded.model->extension_structure().has_value());
  }
  SUBCASE("heis_by_z: split extension") {
    auto loaded = load_group_spec(fixture("heis_by_z.group"));
    CHECK(loaded.model->kind() == "split_extension");
    CHECK(loaded.graded.ok);
  }
  SUBCASE("heis_mod3: polycyclic torsion model") {
    auto loaded = load_group_spec(fixture("heis_mod3.group"));
    CHECK(loaded.model->kind() == "polycyclic");
    CHECK(loaded.graded.ok);
  }
  SUBCASE("modp5 and z_cross_z2") {
    CHECK(load_group_spec(fixture("modp5.group")).model->kind() == "mod_p_extension");
    CHECK(load_group_spec(fixture("z_cross_z2.group")).model->kind() ==
          "split_extension");
  }
}

TEST_CASE("declared inverse that is not the exact inverse is rejected") {
  const char* text = R"({
    "model": "matrix",
    "generators": [{"label": "x", "inverse_label": "X"}],
    "dimension": 2,
    "matrices": {
      "x": [["1", "1"], ["0", "1"]],
      "X": [["1", "1"], ["0", "1"]]
    }
  })";
  CHECK_THROWS_AS(parse_group_spec(text), math_error);
}

TEST_CASE("unknown fields are rejected") {
  const char* text = R"({
    "model": "mod_p_extension",
    "generators": [
      {"label": "a", "inverse_label": "A"},
      {"label": "g", "inverse_label": "G"}
    ],
    "p": 5,
    "extra": 1
  })";
  CHECK_THROWS_AS(parse_group_spec(text), schema_error);
}

TEST_CASE("parse errors carry position information") {
  try {
    parse_group_spec("{ not json");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("group spec") != std::string::npos);
  }
}

TEST_CASE("incomplete action tables are presentation errors") {
  const char* text = R"({
    "model": "split_extension",
    "N": {
      "model": "polycyclic",
      "generators": [{"label": "a", "inverse_label": "A"}],
      "strata": [[0, 0]]
    },
    "Lambda": {
      "model": "polycyclic",
      "generators": [{"label": "t", "inverse_label": "T"}],
      "strata": [[0, 0]]
    },
    "action": {"t a": "a"}
  })";
  CHECK_THROWS_AS(parse_group_spec(text), presentation_error);
}

TEST_CASE("action that is not involution-consistent is rejected") {
  const char* text = R"({
    "model": "split_extension",
    "N": {
      "model": "polycyclic",
      "generators": [{"label": "a", "inverse_label": "A"}],
      "strata": [[0, 0]]
    },
    "Lambda": {
      "model": "polycyclic",
      "generators": [{"label": "t", "inverse_label": "T"}],
      "strata": [[0, 0]]
    },
    "action": {"t a": "a a", "T a": "a"}
  })";
  CHECK_THROWS_AS(parse_group_spec(text), math_error);
}

TEST_CASE("mis-graded polycyclic spec fails strict load but not lenient") {
  const char* text = R"({
    "model": "polycyclic",
    "generators": [
      {"label": "z", "inverse_label": "Z"},
      {"label": "x", "inverse_label": "X"},
      {"label": "y", "inverse_label": "Y"}
    ],
    "strata": [[0, 1], [2, 2]],
    "conjugation": {
      "z^1 x": "x", "z^-1 x": "x",
      "z^1 y": "y", "z^-1 y": "y",
      "x^1 y": "y z", "x^-1 y": "y z^-1"
    }
  })";
  CHECK_THROWS_AS(parse_group_spec(text, true), math_error);
  auto lenient = parse_group_spec(text, false);
  CHECK_FALSE(lenient.graded.ok);
  CHECK(lenient.graded.violations.size() >= 1);
}

TEST_CASE("modp5 fixture satisfies the defining conjugation relation") {
  auto loaded = load_group_spec(fixture("modp5.group"));
  auto conj = loaded.model->evaluate_word(
      parse_word(loaded.model->gens(), "g a g^-1"));
  auto squared = loaded.model->evaluate_word(parse_word(loaded.model->gens(), "a a"));
  CHECK(loaded.model->canonical_key(conj) == loaded.model->canonical_key(squared));
}
