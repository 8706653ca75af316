#include "growthlab/group_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

namespace {

using nlohmann::json;

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw schema_error(where + ": unknown field '" + it.key() + "'");
}

const json& require_field(const json& obj, const std::string& name,
                          const std::string& where) {
  auto it = obj.find(name);
  if (it == obj.end())
    throw schema_error(where + ": missing field '" + name + "'");
  return *it;
}

std::string require_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw schema_error(where + ": expected a string");
  return v.get<std::string>();
}

mpz_class integer_field(const json& v, const std::string& where) {
  if (v.is_number_integer())
    return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    try {
      return mpz_class(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw schema_error(where + ": bad integer literal");
    }
  }
  throw schema_error(where + ": expected an integer or integer string");
}

struct GeneratorPairs {
  std::vector<std::string> labels;  // flattened symmetric list
  std::vector<std::size_t> involution;
  std::vector<std::pair<std::string, std::string>> pairs;
};

GeneratorPairs parse_generators(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty())
    throw schema_error(where + ": 'generators' must be a non-empty array");
  GeneratorPairs out;
  for (const auto& entry : v) {
    if (!entry.is_object())
      throw schema_error(where + ": generator entries must be objects");
    reject_unknown_fields(entry, {"label", "inverse_label"}, where + ".generators");
    std::string label = require_string(require_field(entry, "label", where), where);
    std::string inv =
        require_string(require_field(entry, "inverse_label", where), where);
    out.pairs.emplace_back(label, inv);
    const std::size_t pos = out.labels.size();
    out.labels.push_back(label);
    if (inv == label) {
      out.involution.push_back(pos);
    } else {
      out.labels.push_back(inv);
      out.involution.push_back(pos + 1);
      out.involution.push_back(pos);
    }
  }
  return out;
}

RationalMatrix parse_matrix(const json& v, std::size_t dim,
                            const std::string& where) {
  if (!v.is_array() || v.size() != dim)
    throw schema_error(where + ": expected a " + std::to_string(dim) + "-row matrix");
  RationalMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto& row = v[r];
    if (!row.is_array() || row.size() != dim)
      throw schema_error(where + ": row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < dim; ++c)
      m.at(r, c) = parse_rational(require_string(row[c], where));
  }
  return m;
}

ModelPtr parse_matrix_model(const json& obj, const std::string& where) {
  reject_unknown_fields(obj, {"model", "generators", "matrices", "dimension"}, where);
  GeneratorPairs gens =
      parse_generators(require_field(obj, "generators", where), where);
  const json& mats = require_field(obj, "matrices", where);
  if (!mats.is_object()) throw schema_error(where + ": 'matrices' must be an object");

  std::size_t dim = 0;
  if (obj.contains("dimension")) {
    dim = static_cast<std::size_t>(integer_field(obj["dimension"], where).get_ui());
  } else {
    auto first = mats.begin();
    if (first == mats.end()) throw schema_error(where + ": 'matrices' is empty");
    dim = first->is_array() ? first->size() : 0;
  }
  if (dim == 0) throw schema_error(where + ": matrix dimension must be positive");

  std::vector<RationalMatrix> matrices;
  for (const auto& label : gens.labels) {
    auto it = mats.find(label);
    if (it == mats.end())
      throw schema_error(where + ": no matrix given for generator '" + label + "'");
    matrices.push_back(parse_matrix(*it, dim, where + ".matrices." + label));
  }
  for (auto it = mats.begin(); it != mats.end(); ++it) {
    bool known = false;
    for (const auto& label : gens.labels) known = known || label == it.key();
    if (!known)
      throw schema_error(where + ": matrix for unknown generator '" + it.key() + "'");
  }
  auto set = SymmetricGeneratingSet::create(gens.labels, gens.involution);
  return std::make_shared<MatrixGroupModel>(set, std::move(matrices));
}

struct BasisIndex {
  std::map<std::string, std::pair<std::size_t, int>> letter;  // label -> (basis, sign)
  std::map<std::string, std::size_t> positive;                // basis label -> index
};

BasisIndex index_basis(const std::vector<PcGenerator>& basis) {
  BasisIndex idx;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    idx.letter[basis[i].label] = {i, 1};
    idx.positive[basis[i].label] = i;
    if (basis[i].inverse_label != basis[i].label)
      idx.letter[basis[i].inverse_label] = {i, -1};
  }
  return idx;
}

PcWord parse_pc_word(const std::string& text, const BasisIndex& idx,
                     const std::string& where) {
  PcWord out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    int sign = 1;
    if (token.size() > 3 && token.ends_with("^-1")) {
      sign = -1;
      token.resize(token.size() - 3);
    }
    auto it = idx.letter.find(token);
    if (it == idx.letter.end())
      throw schema_error(where + ": unknown basis letter '" + token + "'");
    out.push_back(PcLetter{it->second.first, it->second.second * sign});
  }
  return out;
}

std::shared_ptr<const PolycyclicPresentation> parse_polycyclic_presentation(
    const json& obj, const std::string& where) {
  reject_unknown_fields(obj, {"model", "generators", "strata", "moduli", "conjugation"},
                        where);
  GeneratorPairs gens =
      parse_generators(require_field(obj, "generators", where), where);

  std::vector<PcGenerator> basis;
  for (const auto& [label, inv] : gens.pairs)
    basis.push_back(PcGenerator{label, inv, std::nullopt});

  if (obj.contains("moduli")) {
    const json& moduli = obj["moduli"];
    if (!moduli.is_object()) throw schema_error(where + ": 'moduli' must be an object");
    for (auto it = moduli.begin(); it != moduli.end(); ++it) {
      bool found = false;
      for (auto& g : basis) {
        if (g.label == it.key()) {
          g.modulus = integer_field(*it, where + ".moduli");
          found = true;
        }
      }
      if (!found)
        throw schema_error(where + ": modulus for unknown generator '" + it.key() + "'");
    }
  }

  const json& strata_field = require_field(obj, "strata", where);
  if (!strata_field.is_array() || strata_field.empty())
    throw schema_error(where + ": 'strata' must be a non-empty array of index ranges");
  std::vector<std::pair<std::size_t, std::size_t>> strata;
  for (const auto& range : strata_field) {
    if (!range.is_array() || range.size() != 2)
      throw schema_error(where + ": each stratum must be a [first, last] index range");
    strata.emplace_back(integer_field(range[0], where).get_ui(),
                        integer_field(range[1], where).get_ui());
  }

  BasisIndex idx = index_basis(basis);
  PolycyclicPresentation::ConjugationTable table;
  if (obj.contains("conjugation")) {
    const json& conj = obj["conjugation"];
    if (!conj.is_object())
      throw schema_error(where + ": 'conjugation' must be an object");
    for (auto it = conj.begin(); it != conj.end(); ++it) {
      std::istringstream key(it.key());
      std::string conjugator, target;
      if (!(key >> conjugator >> target) || (key >> std::ws, !key.eof()))
        throw schema_error(where + ": conjugation key '" + it.key() +
                           "' is not of the form 'a^1 b'");
      int sign = 0;
      if (conjugator.ends_with("^-1")) {
        sign = -1;
        conjugator.resize(conjugator.size() - 3);
      } else if (conjugator.ends_with("^1")) {
        sign = 1;
        conjugator.resize(conjugator.size() - 2);
      } else {
        throw schema_error(where + ": conjugation key '" + it.key() +
                           "' must mark the conjugator with ^1 or ^-1");
      }
      auto ci = idx.positive.find(conjugator);
      auto ti = idx.positive.find(target);
      if (ci == idx.positive.end() || ti == idx.positive.end())
        throw schema_error(where + ": conjugation key '" + it.key() +
                           "' names an unknown basis element");
      if (ci->second >= ti->second)
        throw schema_error(where + ": conjugation key '" + it.key() +
                           "' must conjugate a later basis element by an earlier one");
      table[{ci->second, sign, ti->second}] =
          parse_pc_word(require_string(*it, where), idx, where + ".conjugation");
    }
  }

  try {
    return std::make_shared<PolycyclicPresentation>(std::move(basis), strata,
                                                    std::move(table));
  } catch (const structural_error& e) {
    throw schema_error(where + ": " + e.what());
  }
}

ModelPtr parse_model(const json& obj, const std::string& where);

ModelPtr parse_split_extension(const json& obj, const std::string& where) {
  reject_unknown_fields(obj, {"model", "generators", "N", "Lambda", "action"}, where);
  const json& n_obj = require_field(obj, "N", where);
  if (!n_obj.is_object() ||
      require_string(require_field(n_obj, "model", where + ".N"), where) !=
          "polycyclic")
    throw schema_error(where + ": 'N' must be a nested polycyclic spec");
  auto n_pres = parse_polycyclic_presentation(n_obj, where + ".N");
  ModelPtr lambda = parse_model(require_field(obj, "Lambda", where), where + ".Lambda");

  BasisIndex idx;
  {
    std::vector<PcGenerator> basis;
    for (std::size_t i = 0; i < n_pres->rank(); ++i)
      basis.push_back(n_pres->generator(i));
    idx = index_basis(basis);
  }

  const json& action_obj = require_field(obj, "action", where);
  if (!action_obj.is_object()) throw schema_error(where + ": 'action' must be an object");
  const auto& l_set = *lambda->gens();
  std::vector<std::vector<ExpVec>> action(l_set.size(),
                                          std::vector<ExpVec>(n_pres->rank()));
  std::vector<std::vector<bool>> seen(l_set.size(),
                                      std::vector<bool>(n_pres->rank(), false));
  for (auto it = action_obj.begin(); it != action_obj.end(); ++it) {
    std::istringstream key(it.key());
    std::string gamma, alpha;
    if (!(key >> gamma >> alpha) || (key >> std::ws, !key.eof()))
      throw schema_error(where + ": action key '" + it.key() +
                         "' is not of the form 'gamma alpha'");
    auto gi = l_set.index_of(gamma);
    auto ai = idx.positive.find(alpha);
    if (!gi)
      throw schema_error(where + ": action key names unknown Lambda generator '" +
                         gamma + "'");
    if (ai == idx.positive.end())
      throw schema_error(where + ": action key names unknown N basis element '" +
                         alpha + "'");
    PcWord img = parse_pc_word(require_string(*it, where), idx, where + ".action");
    action[*gi][ai->second] = n_pres->collect(img);
    seen[*gi][ai->second] = true;
  }
  for (std::size_t j = 0; j < l_set.size(); ++j)
    for (std::size_t p = 0; p < n_pres->rank(); ++p)
      if (!seen[j][p])
        throw presentation_error(where + ": action table incomplete, missing '" +
                                 l_set.label(j) + " " + n_pres->generator(p).label +
                                 "'");

  auto ext = std::make_shared<SplitExtensionModel>(n_pres, lambda, std::move(action));

  if (obj.contains("generators")) {
    GeneratorPairs declared = parse_generators(obj["generators"], where);
    if (declared.labels != ext->gens()->labels())
      throw schema_error(where +
                         ": declared generators do not match N followed by Lambda");
  }

  ActionCheck check = ext->verify_action();
  if (!check.inverse_violations.empty())
    throw math_error(where + ": " + check.inverse_violations.front());
  return ext;
}

ModelPtr parse_mod_p(const json& obj, const std::string& where) {
  reject_unknown_fields(obj, {"model", "generators", "p"}, where);
  GeneratorPairs gens =
      parse_generators(require_field(obj, "generators", where), where);
  mpz_class p = integer_field(require_field(obj, "p", where), where + ".p");
  if (!p.fits_ulong_p()) throw schema_error(where + ": p is out of range");
  auto set = SymmetricGeneratingSet::create(gens.labels, gens.involution);
  try {
    return std::make_shared<ModPExtensionModel>(p.get_ui(), set);
  } catch (const structural_error& e) {
    throw schema_error(where + ": " + std::string(e.what()));
  }
}

ModelPtr parse_model(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw schema_error(where + ": expected an object");
  const std::string kind = require_string(require_field(obj, "model", where), where);
  if (kind == "matrix") return parse_matrix_model(obj, where);
  if (kind == "polycyclic")
    return std::make_shared<PolycyclicModel>(parse_polycyclic_presentation(obj, where));
  if (kind == "split_extension") return parse_split_extension(obj, where);
  if (kind == "mod_p_extension") return parse_mod_p(obj, where);
  throw schema_error(where + ": unknown model kind '" + kind + "'");
}

GradedReport graded_report_of(const ModelPtr& model) {
  if (auto poly = std::dynamic_pointer_cast<const PolycyclicModel>(model))
    return verify_graded_series(poly->presentation());
  if (auto ext = std::dynamic_pointer_cast<const SplitExtensionModel>(model)) {
    GradedReport report = verify_graded_series(*ext);
    if (auto nested = graded_report_of(ext->lambda_model()); !nested.ok) {
      for (auto& v : nested.violations)
        report.violations.push_back({"Lambda: " + v.description});
      report.ok = false;
    }
    return report;
  }
  return {};
}

}  // namespace

LoadedGroup parse_group_spec(const std::string& text, bool strict) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error(std::string("group spec: ") + e.what());
  }
  LoadedGroup out;
  out.model = parse_model(doc, "group");
  out.graded = graded_report_of(out.model);
  if (strict && !out.graded.ok)
    throw math_error("group spec: graded series violated: " +
                     out.graded.violations.front().description);
  return out;
}

LoadedGroup load_group_spec(const std::string& path, bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open group spec '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_group_spec(buf.str(), strict);
}

}  // namespace growthlab
