#include "growthlab/models.hpp"

#include <algorithm>
#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

GroupModel::GroupModel(GenSetPtr gens) : gens_(std::move(gens)) {
  if (!gens_) throw structural_error("model: null generating set");
}

bool GroupModel::is_identity(const Element& g) const {
  return canonical_key(g) == canonical_key(identity());
}

Element GroupModel::evaluate_word(const Word& w) const {
  if (w.gens() && w.gens()->fingerprint() != gens_->fingerprint())
    throw structural_error("evaluate_word: word over a different generating set");
  Element acc = identity();
  for (std::size_t i = 0; i < w.size(); ++i)
    acc = multiply(acc, generator_image(w.element_index(i)));
  return acc;
}

Element model_power(const GroupModel& model, const Element& g, const mpz_class& e) {
  if (e == 0) return model.identity();
  Element base = e > 0 ? g : model.inverse(g);
  mpz_class reps = e > 0 ? e : mpz_class(-e);
  Element acc;
  bool acc_set = false;
  while (reps > 0) {
    if (mpz_tstbit(reps.get_mpz_t(), 0)) {
      acc = acc_set ? model.multiply(acc, base) : base;
      acc_set = true;
    }
    reps >>= 1;
    if (reps > 0) base = model.multiply(base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// MatrixGroupModel

MatrixGroupModel::MatrixGroupModel(GenSetPtr gens,
                                   std::vector<RationalMatrix> matrices)
    : GroupModel(std::move(gens)), matrices_(std::move(matrices)) {
  if (matrices_.size() != gens_->size())
    throw structural_error("matrix model: one matrix required per generator");
  dim_ = matrices_.empty() ? 1 : matrices_[0].dim();
  if (dim_ == 0) throw structural_error("matrix model: zero-dimensional matrix");
  for (const auto& m : matrices_)
    if (m.dim() != dim_)
      throw structural_error("matrix model: inconsistent matrix dimensions");
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const std::size_t j = gens_->involution(i);
    if (!matrices_[i].multiply(matrices_[j]).is_identity())
      throw math_error("matrix model: declared inverse of '" + gens_->label(i) +
                       "' does not multiply to the identity");
  }
}

Element MatrixGroupModel::identity() const {
  return make_element(RationalMatrix::identity(dim_));
}

Element MatrixGroupModel::generator_image(std::size_t gen_index) const {
  return make_element(matrices_.at(gen_index));
}

Element MatrixGroupModel::multiply(const Element& a, const Element& b) const {
  return make_element(
      element_as<RationalMatrix>(a).multiply(element_as<RationalMatrix>(b)));
}

Element MatrixGroupModel::inverse(const Element& g) const {
  return make_element(element_as<RationalMatrix>(g).inverse());
}

std::string MatrixGroupModel::canonical_key(const Element& g) const {
  return element_as<RationalMatrix>(g).canonical_key();
}

const RationalMatrix& MatrixGroupModel::matrix_of(std::size_t gen_index) const {
  return matrices_.at(gen_index);
}

// ---------------------------------------------------------------------------
// PolycyclicModel

PolycyclicModel::PolycyclicModel(std::shared_ptr<const PolycyclicPresentation> pres)
    : GroupModel(pres->gen_set()), pres_(std::move(pres)) {}

Element PolycyclicModel::identity() const {
  return make_element(pres_->identity_vector());
}

Element PolycyclicModel::generator_image(std::size_t gen_index) const {
  auto [basis, sign] = pres_->letter_of_gen(gen_index);
  return make_element(pres_->unit(basis, sign));
}

Element PolycyclicModel::multiply(const Element& a, const Element& b) const {
  return make_element(
      pres_->multiply(element_as<ExpVec>(a), element_as<ExpVec>(b)));
}

Element PolycyclicModel::inverse(const Element& g) const {
  return make_element(pres_->inverse(element_as<ExpVec>(g)));
}

std::string PolycyclicModel::canonical_key(const Element& g) const {
  return pres_->key_of(element_as<ExpVec>(g));
}

// ---------------------------------------------------------------------------
// SplitExtensionModel

namespace {

GenSetPtr join_gen_sets(const SymmetricGeneratingSet& n_set,
                        const SymmetricGeneratingSet& l_set) {
  std::vector<std::string> labels;
  std::vector<std::size_t> involution;
  labels.reserve(n_set.size() + l_set.size());
  for (std::size_t i = 0; i < n_set.size(); ++i) {
    labels.push_back(n_set.label(i));
    involution.push_back(n_set.involution(i));
  }
  const std::size_t off = n_set.size();
  for (std::size_t i = 0; i < l_set.size(); ++i) {
    labels.push_back(l_set.label(i));
    involution.push_back(off + l_set.involution(i));
  }
  return SymmetricGeneratingSet::create(std::move(labels), std::move(involution));
}

}  // namespace

SplitExtensionModel::SplitExtensionModel(
    std::shared_ptr<const PolycyclicPresentation> n_pres, ModelPtr lambda,
    std::vector<std::vector<ExpVec>> action)
    : GroupModel(join_gen_sets(*n_pres->gen_set(), *lambda->gens())),
      n_pres_(std::move(n_pres)),
      lambda_(std::move(lambda)),
      action_(std::move(action)) {
  n_gens_ = n_pres_->gen_set()->size();
  if (action_.size() != lambda_->gens()->size())
    throw presentation_error(
        "split extension: action table needs one row per Lambda generator");
  for (auto& row : action_) {
    if (row.size() != n_pres_->rank())
      throw presentation_error(
          "split extension: action row needs one image per N basis element");
    for (const auto& img : row)
      if (img.size() != n_pres_->rank())
        throw presentation_error("split extension: action image of wrong rank");
  }
}

std::pair<std::size_t, bool> SplitExtensionModel::split_gen(
    std::size_t gen_index) const {
  if (gen_index < n_gens_) return {gen_index, true};
  return {gen_index - n_gens_, false};
}

Element SplitExtensionModel::identity() const {
  return make_element(ExtElem{n_pres_->identity_vector(), lambda_->identity(),
                              Word(lambda_->gens(), {})});
}

Element SplitExtensionModel::generator_image(std::size_t gen_index) const {
  auto [idx, in_n] = split_gen(gen_index);
  if (in_n) {
    auto [basis, sign] = n_pres_->letter_of_gen(idx);
    return make_element(ExtElem{n_pres_->unit(basis, sign), lambda_->identity(),
                                Word(lambda_->gens(), {})});
  }
  return make_element(ExtElem{n_pres_->identity_vector(),
                              lambda_->generator_image(idx),
                              Word(lambda_->gens(), {Letter{idx, false}})});
}

ExpVec SplitExtensionModel::act_by_gen(std::size_t lambda_gen,
                                       const ExpVec& v) const {
  const auto& row = action_.at(lambda_gen);
  ExpVec out = n_pres_->identity_vector();
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] == 0) continue;
    out = n_pres_->multiply(out, n_pres_->power(row[p], v[p]));
  }
  return out;
}

std::shared_ptr<const std::vector<ExpVec>> SplitExtensionModel::action_of(
    const Element& lambda, const Word& lambda_word) const {
  const std::string key = lambda_->canonical_key(lambda);
  {
    std::lock_guard<std::mutex> lock(cache_.mutex);
    auto it = cache_.images.find(key);
    if (it != cache_.images.end()) return it->second;
  }
  // phi(l1 ... lu) = phi(l1) o ... o phi(lu): fold the word right to left.
  auto images = std::make_shared<std::vector<ExpVec>>();
  images->reserve(n_pres_->rank());
  for (std::size_t p = 0; p < n_pres_->rank(); ++p)
    images->push_back(n_pres_->unit(p, 1));
  for (std::size_t i = lambda_word.size(); i-- > 0;) {
    const std::size_t g = lambda_word.element_index(i);
    for (auto& img : *images) img = act_by_gen(g, img);
  }
  {
    std::lock_guard<std::mutex> lock(cache_.mutex);
    if (cache_.images.size() >= cache_.max_entries && !cache_.order.empty()) {
      cache_.images.erase(cache_.order.front());
      cache_.order.pop_front();
    }
    if (cache_.images.emplace(key, images).second) cache_.order.push_back(key);
  }
  return images;
}

ExpVec SplitExtensionModel::apply_action(const std::vector<ExpVec>& images,
                                         const ExpVec& v) const {
  ExpVec out = n_pres_->identity_vector();
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] == 0) continue;
    out = n_pres_->multiply(out, n_pres_->power(images[p], v[p]));
  }
  return out;
}

Element SplitExtensionModel::multiply(const Element& a, const Element& b) const {
  const ExtElem& x = element_as<ExtElem>(a);
  const ExtElem& y = element_as<ExtElem>(b);
  auto images = action_of(x.lambda, x.lambda_word);
  ExtElem out;
  out.n = n_pres_->multiply(x.n, apply_action(*images, y.n));
  out.lambda = lambda_->multiply(x.lambda, y.lambda);
  out.lambda_word = concat(x.lambda_word, y.lambda_word);
  return make_element(std::move(out));
}

Element SplitExtensionModel::inverse(const Element& g) const {
  const ExtElem& x = element_as<ExtElem>(g);
  ExtElem out;
  out.lambda = lambda_->inverse(x.lambda);
  out.lambda_word = invert_word(x.lambda_word);
  auto images = action_of(out.lambda, out.lambda_word);
  out.n = apply_action(*images, n_pres_->inverse(x.n));
  return make_element(std::move(out));
}

std::string SplitExtensionModel::canonical_key(const Element& g) const {
  const ExtElem& x = element_as<ExtElem>(g);
  return "X" + n_pres_->key_of(x.n) + '\x1e' + lambda_->canonical_key(x.lambda);
}

std::optional<QuotientData> SplitExtensionModel::quotient() const {
  QuotientData q;
  q.quotient = lambda_;
  q.kernel = std::make_shared<PolycyclicModel>(n_pres_);
  q.gen_image.assign(gens_->size(), std::nullopt);
  for (std::size_t i = n_gens_; i < gens_->size(); ++i)
    q.gen_image[i] = i - n_gens_;
  return q;
}

std::optional<ExtensionStructure> SplitExtensionModel::extension_structure() const {
  ExtensionStructure s;
  s.ambient = shared_from_this();
  s.n_basis = n_pres_;
  s.b1_of_gen.assign(gens_->size(), std::nullopt);
  for (std::size_t i = 0; i < n_gens_; ++i)
    s.b1_of_gen[i] = n_pres_->letter_of_gen(i);
  for (std::size_t i = n_gens_; i < gens_->size(); ++i) {
    s.s0_gens.push_back(i);
    s.lambda_gen_of_s0.push_back(i - n_gens_);
  }
  s.lambda = lambda_;
  s.action = action_;
  s.ambient_gen_of_basis.resize(n_pres_->rank());
  for (std::size_t b = 0; b < n_pres_->rank(); ++b)
    s.ambient_gen_of_basis[b] = n_pres_->gen_of_basis(b, 1);
  return s;
}

bool SplitExtensionModel::certified_torsion_free() const {
  return n_pres_->torsion_free() && lambda_->certified_torsion_free();
}

ActionCheck SplitExtensionModel::verify_action() const {
  ActionCheck check;
  const auto& l_set = *lambda_->gens();
  for (std::size_t j = 0; j < l_set.size(); ++j) {
    const std::size_t ji = l_set.involution(j);
    for (std::size_t p = 0; p < n_pres_->rank(); ++p) {
      ExpVec round_trip = act_by_gen(j, action_.at(ji).at(p));
      if (round_trip != n_pres_->unit(p, 1))
        check.inverse_violations.push_back(
            "action of " + l_set.label(j) + " composed with " + l_set.label(ji) +
            " moves basis element " + n_pres_->generator(p).label);
      const std::size_t hp = n_pres_->stratum_of(p);
      const ExpVec& img = action_.at(j).at(p);
      for (std::size_t q = 0; q < img.size(); ++q) {
        if (img[q] != 0 && n_pres_->stratum_of(q) < hp)
          check.grading_violations.push_back(
              "action of " + l_set.label(j) + " maps stratum-" +
              std::to_string(hp + 1) + " element " +
              n_pres_->generator(p).label + " into lower stratum " +
              std::to_string(n_pres_->stratum_of(q) + 1) + " (" +
              n_pres_->generator(q).label + ")");
      }
    }
  }
  check.ok = check.inverse_violations.empty() && check.grading_violations.empty();
  return check;
}

// ---------------------------------------------------------------------------
// ModPExtensionModel

namespace {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

ModPExtensionModel::ModPExtensionModel(unsigned long p, GenSetPtr gens)
    : GroupModel(std::move(gens)), p_(p) {
  if (p_ < 3 || p_ % 2 == 0 || !is_prime(p_))
    throw math_error("mod-p extension: p must be an odd prime, got " +
                     std::to_string(p_));
  if (gens_->size() != 4 || gens_->involution(0) != 1 || gens_->involution(2) != 3)
    throw structural_error(
        "mod-p extension: needs two generator pairs (torsion, shift)");
  order_of_2_ = 1;
  unsigned long x = 2 % p_;
  while (x != 1) {
    x = (x * 2) % p_;
    ++order_of_2_;
  }
}

unsigned long ModPExtensionModel::pow2(const mpz_class& n) const {
  mpz_class r = n % order_of_2_;
  if (r < 0) r += order_of_2_;
  unsigned long e = r.get_ui();
  unsigned long acc = 1;
  unsigned long base = 2 % p_;
  while (e > 0) {
    if (e & 1) acc = (acc * base) % p_;
    base = (base * base) % p_;
    e >>= 1;
  }
  return acc;
}

Element ModPExtensionModel::identity() const {
  return make_element(ModPElem{0, 0});
}

Element ModPExtensionModel::generator_image(std::size_t gen_index) const {
  switch (gen_index) {
    case 0: return make_element(ModPElem{1, 0});
    case 1: return make_element(ModPElem{p_ - 1, 0});
    case 2: return make_element(ModPElem{0, 1});
    case 3: return make_element(ModPElem{0, -1});
    default: throw structural_error("mod-p extension: generator index out of range");
  }
}

Element ModPExtensionModel::multiply(const Element& a, const Element& b) const {
  const ModPElem& x = element_as<ModPElem>(a);
  const ModPElem& y = element_as<ModPElem>(b);
  ModPElem out;
  out.residue = (x.residue + pow2(x.shift) * y.residue) % p_;
  out.shift = x.shift + y.shift;
  return make_element(std::move(out));
}

Element ModPExtensionModel::inverse(const Element& g) const {
  const ModPElem& x = element_as<ModPElem>(g);
  ModPElem out;
  out.shift = -x.shift;
  out.residue = (p_ - (pow2(out.shift) * x.residue) % p_) % p_;
  return make_element(std::move(out));
}

std::string ModPExtensionModel::canonical_key(const Element& g) const {
  const ModPElem& x = element_as<ModPElem>(g);
  return "Z" + std::to_string(x.residue) + " " + x.shift.get_str();
}

namespace {

std::shared_ptr<const PolycyclicPresentation> modp_kernel_presentation(
    const SymmetricGeneratingSet& gens, unsigned long p) {
  std::vector<PcGenerator> basis;
  basis.push_back(PcGenerator{gens.label(0), gens.label(1), mpz_class(p)});
  return std::make_shared<PolycyclicPresentation>(
      std::move(basis),
      std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
      PolycyclicPresentation::ConjugationTable{});
}

std::shared_ptr<const PolycyclicPresentation> modp_shift_presentation(
    const SymmetricGeneratingSet& gens) {
  std::vector<PcGenerator> basis;
  basis.push_back(PcGenerator{gens.label(2), gens.label(3), std::nullopt});
  return std::make_shared<PolycyclicPresentation>(
      std::move(basis),
      std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}},
      PolycyclicPresentation::ConjugationTable{});
}

}  // namespace

std::optional<QuotientData> ModPExtensionModel::quotient() const {
  QuotientData q;
  q.quotient = std::make_shared<PolycyclicModel>(modp_shift_presentation(*gens_));
  q.kernel = std::make_shared<PolycyclicModel>(modp_kernel_presentation(*gens_, p_));
  q.gen_image = {std::nullopt, std::nullopt, 0, 1};
  return q;
}

std::optional<ExtensionStructure> ModPExtensionModel::extension_structure() const {
  ExtensionStructure s;
  s.ambient = shared_from_this();
  s.n_basis = modp_kernel_presentation(*gens_, p_);
  s.b1_of_gen = {std::pair<std::size_t, int>{0, 1},
                 std::pair<std::size_t, int>{0, -1}, std::nullopt, std::nullopt};
  s.s0_gens = {2, 3};
  s.lambda = std::make_shared<PolycyclicModel>(modp_shift_presentation(*gens_));
  s.lambda_gen_of_s0 = {0, 1};
  s.action.resize(2);
  s.action[0] = {ExpVec{mpz_class(2)}};
  s.action[1] = {ExpVec{mpz_class((p_ + 1) / 2)}};
  s.ambient_gen_of_basis = {0};
  return s;
}

// ---------------------------------------------------------------------------
// ExtensionStructure

Element ExtensionStructure::evaluate_n(const ExpVec& v) const {
  Element acc = ambient->identity();
  for (std::size_t p = 0; p < v.size(); ++p) {
    if (v[p] == 0) continue;
    Element gen = ambient->generator_image(ambient_gen_of_basis.at(p));
    acc = ambient->multiply(acc, model_power(*ambient, gen, v[p]));
  }
  return acc;
}

std::optional<ExpVec> ExtensionStructure::decompose_n(const Element& g,
                                                      std::size_t budget) const {
  const std::string target = ambient->canonical_key(g);
  // Native split extension over the same N: read the coordinates.
  if (const auto* split = dynamic_cast<const SplitExtensionModel*>(ambient.get())) {
    if (&split->n_presentation() == n_basis.get()) {
      const ExtElem& x = element_as<ExtElem>(g);
      if (!split->lambda_model()->is_identity(x.lambda)) return std::nullopt;
      return x.n;
    }
  }
  // Budgeted breadth-first search through N.
  if (ambient->canonical_key(g) == ambient->canonical_key(ambient->identity()))
    return n_basis->identity_vector();
  std::map<std::string, ExpVec> seen;
  std::vector<ExpVec> frontier{n_basis->identity_vector()};
  seen.emplace(ambient->canonical_key(ambient->identity()),
               n_basis->identity_vector());
  while (!frontier.empty() && seen.size() < budget) {
    std::vector<ExpVec> next;
    for (const auto& v : frontier) {
      for (std::size_t p = 0; p < n_basis->rank(); ++p) {
        for (int sign : {1, -1}) {
          if (sign < 0 && n_basis->is_torsion(p)) continue;
          ExpVec w = n_basis->multiply(v, n_basis->unit(p, sign));
          std::string key = ambient->canonical_key(evaluate_n(w));
          if (key == target) return w;
          if (seen.emplace(key, w).second) next.push_back(std::move(w));
        }
      }
    }
    frontier = std::move(next);
  }
  return std::nullopt;
}

Word ExtensionStructure::lambda_word_of(const Word& sigma) const {
  std::vector<Letter> letters;
  letters.reserve(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const std::size_t g = sigma.element_index(i);
    if (is_b1_gen(g))
      throw structural_error("lambda_word_of: word contains an N letter");
    auto it = std::find(s0_gens.begin(), s0_gens.end(), g);
    if (it == s0_gens.end())
      throw structural_error("lambda_word_of: letter outside B1 and S0");
    letters.push_back(Letter{lambda_gen_of_s0[it - s0_gens.begin()], false});
  }
  return Word(lambda->gens(), std::move(letters));
}

ExtensionStructure make_extension_structure(
    ModelPtr ambient, std::shared_ptr<const PolycyclicPresentation> n_basis,
    const std::vector<std::optional<std::pair<std::size_t, int>>>& b1_of_gen,
    ModelPtr lambda, const std::vector<std::size_t>& lambda_gen_of_s0,
    std::size_t decompose_budget) {
  ExtensionStructure s;
  s.ambient = std::move(ambient);
  s.n_basis = std::move(n_basis);
  s.b1_of_gen = b1_of_gen;
  if (s.b1_of_gen.size() != s.ambient->gens()->size())
    throw structural_error("extension structure: b1 map size mismatch");
  s.lambda = std::move(lambda);
  for (std::size_t i = 0; i < s.b1_of_gen.size(); ++i)
    if (!s.b1_of_gen[i]) s.s0_gens.push_back(i);
  if (s.s0_gens.size() != lambda_gen_of_s0.size())
    throw structural_error("extension structure: S0 projection size mismatch");
  s.lambda_gen_of_s0 = lambda_gen_of_s0;

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  s.ambient_gen_of_basis.assign(s.n_basis->rank(), kUnset);
  for (std::size_t i = 0; i < s.b1_of_gen.size(); ++i) {
    if (s.b1_of_gen[i] && s.b1_of_gen[i]->second == 1)
      s.ambient_gen_of_basis.at(s.b1_of_gen[i]->first) = i;
  }
  for (std::size_t b = 0; b < s.n_basis->rank(); ++b)
    if (s.ambient_gen_of_basis[b] == kUnset)
      throw structural_error(
          "extension structure: basis element without a positive ambient letter");

  // Derive the action of each Lambda generator by conjugating in the ambient
  // model and decomposing over N.
  const std::size_t l_count = s.lambda->gens()->size();
  s.action.assign(l_count, {});
  std::vector<std::optional<std::size_t>> lift(l_count);
  for (std::size_t i = 0; i < s.s0_gens.size(); ++i)
    if (!lift[s.lambda_gen_of_s0[i]]) lift[s.lambda_gen_of_s0[i]] = s.s0_gens[i];
  for (std::size_t j = 0; j < l_count; ++j) {
    if (!lift[j])
      throw presentation_error(
          "extension structure: Lambda generator without a lift in S0");
    Element t = s.ambient->generator_image(*lift[j]);
    Element t_inv = s.ambient->inverse(t);
    s.action[j].resize(s.n_basis->rank());
    for (std::size_t p = 0; p < s.n_basis->rank(); ++p) {
      Element conj = s.ambient->multiply(
          s.ambient->multiply(t, s.evaluate_n(s.n_basis->unit(p, 1))), t_inv);
      auto vec = s.decompose_n(conj, decompose_budget);
      if (!vec)
        throw presentation_error(
            "extension structure: conjugate of basis element '" +
            s.n_basis->generator(p).label + "' is not expressible over N");
      s.action[j][p] = std::move(*vec);
    }
  }
  return s;
}

GradedReport verify_graded_series(const PolycyclicPresentation& pres) {
  return pres.verify_graded();
}

GradedReport verify_graded_series(const SplitExtensionModel& ext) {
  GradedReport report = ext.n_presentation().verify_graded();
  ActionCheck action = ext.verify_action();
  for (auto& v : action.grading_violations) report.violations.push_back({v});
  for (auto& v : action.inverse_violations) report.violations.push_back({v});
  report.ok = report.violations.empty();
  return report;
}

}  // namespace growthlab
