#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "growthlab/element.hpp"
#include "growthlab/integer_matrix.hpp"
#include "growthlab/polycyclic.hpp"
#include "growthlab/rational_matrix.hpp"
#include "growthlab/words.hpp"

namespace growthlab {

class GroupModel;
using ModelPtr = std::shared_ptr<const GroupModel>;

/// Quotient data for models carrying a natural projection pi: Gamma -> Lambda:
/// the quotient model, the kernel as a standalone model, and the image of each
/// Gamma generator (nullopt when it maps to the identity).
struct QuotientData {
  ModelPtr quotient;
  ModelPtr kernel;
  std::vector<std::optional<std::size_t>> gen_image;
};

/// Rewriting-facing view of a group Gamma with a declared normal polycyclic
/// subgroup N and quotient Lambda: which ambient generators span N (B1), which
/// project to Lambda generators (S0), and the conjugation action of every S0
/// generator on the N basis as exponent vectors.
///
/// Split-extension and mod-p models derive this automatically; a view over any
/// other model can be built with make_extension_structure.
struct ExtensionStructure {
  ModelPtr ambient;
  std::shared_ptr<const PolycyclicPresentation> n_basis;
  /// Per ambient generator: (basis index, sign) for B1 letters, nullopt for S0.
  std::vector<std::optional<std::pair<std::size_t, int>>> b1_of_gen;
  /// Ambient generator indices forming S0, in ambient order.
  std::vector<std::size_t> s0_gens;
  ModelPtr lambda;
  /// Lambda generator index for each entry of s0_gens.
  std::vector<std::size_t> lambda_gen_of_s0;
  /// action[lambda_gen][basis] = normal form of the conjugate of the basis
  /// element by (a lift of) that Lambda generator.
  std::vector<std::vector<ExpVec>> action;
  /// Ambient generator index realizing basis element i (positively).
  std::vector<std::size_t> ambient_gen_of_basis;

  /// Evaluates an exponent vector over the N basis in the ambient model.
  Element evaluate_n(const ExpVec& v) const;
  /// Expresses an ambient element over the N basis if possible. For native
  /// split extensions this reads coordinates; otherwise a budgeted search.
  std::optional<ExpVec> decompose_n(const Element& g, std::size_t budget = 1u << 20) const;
  /// Word over ambient S0 letters -> word over Lambda's generating set.
  Word lambda_word_of(const Word& sigma) const;

  bool is_b1_gen(std::size_t ambient_gen) const { return b1_of_gen.at(ambient_gen).has_value(); }
};

struct ActionCheck {
  bool ok = true;
  std::vector<std::string> inverse_violations;  // phi(g) after phi(g^-1) moves a basis element
  std::vector<std::string> grading_violations;  // an image leaves its stratum cone
};

/// Abstract exact-arithmetic element algebra over a symmetric generating set.
/// Implementations are immutable after construction; element operations are
/// pure and safe for concurrent use.
class GroupModel {
 public:
  virtual ~GroupModel() = default;

  virtual std::string kind() const = 0;
  const GenSetPtr& gens() const { return gens_; }

  virtual Element identity() const = 0;
  virtual Element generator_image(std::size_t gen_index) const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& g) const = 0;

  /// Deterministic injective serialization; equal elements <=> equal keys.
  virtual std::string canonical_key(const Element& g) const = 0;

  bool is_identity(const Element& g) const;

  /// Product of generator images in word order; identity for the empty word.
  Element evaluate_word(const Word& w) const;

  /// Natural quotient projection, when the model has one.
  virtual std::optional<QuotientData> quotient() const { return std::nullopt; }

  /// Extension view for the rewriting engine, when the model has one.
  virtual std::optional<ExtensionStructure> extension_structure() const {
    return std::nullopt;
  }

  /// True when the model is torsion-free by construction, so any non-identity
  /// element provably has infinite order.
  virtual bool certified_torsion_free() const { return false; }

 protected:
  explicit GroupModel(GenSetPtr gens);
  GenSetPtr gens_;
  mutable std::string identity_key_;
};

class MatrixGroupModel final : public GroupModel,
                               public std::enable_shared_from_this<MatrixGroupModel> {
 public:
  /// One matrix per generator; throws math_error unless the matrix of each
  /// generator's involution partner is its exact inverse.
  MatrixGroupModel(GenSetPtr gens, std::vector<RationalMatrix> matrices);

  std::string kind() const override { return "matrix"; }
  Element identity() const override;
  Element generator_image(std::size_t gen_index) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& g) const override;
  std::string canonical_key(const Element& g) const override;

  const RationalMatrix& matrix_of(std::size_t gen_index) const;
  std::size_t dimension() const { return dim_; }

 private:
  std::vector<RationalMatrix> matrices_;
  std::size_t dim_;
};

class PolycyclicModel final : public GroupModel,
                              public std::enable_shared_from_this<PolycyclicModel> {
 public:
  explicit PolycyclicModel(std::shared_ptr<const PolycyclicPresentation> pres);

  std::string kind() const override { return "polycyclic"; }
  Element identity() const override;
  Element generator_image(std::size_t gen_index) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& g) const override;
  std::string canonical_key(const Element& g) const override;
  bool certified_torsion_free() const override { return pres_->torsion_free(); }

  const PolycyclicPresentation& presentation() const { return *pres_; }
  std::shared_ptr<const PolycyclicPresentation> presentation_ptr() const { return pres_; }

 private:
  std::shared_ptr<const PolycyclicPresentation> pres_;
};

/// Split extension N x| Lambda: N polycyclic, Lambda any model, the action of
/// each Lambda generator on the N basis given by exponent vectors. Elements
/// are pairs (n, lambda); (n1,l1)(n2,l2) = (n1 * phi(l1)(n2), l1 l2).
class SplitExtensionModel final
    : public GroupModel,
      public std::enable_shared_from_this<SplitExtensionModel> {
 public:
  SplitExtensionModel(std::shared_ptr<const PolycyclicPresentation> n_pres,
                      ModelPtr lambda, std::vector<std::vector<ExpVec>> action);

  std::string kind() const override { return "split_extension"; }
  Element identity() const override;
  Element generator_image(std::size_t gen_index) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& g) const override;
  std::string canonical_key(const Element& g) const override;
  std::optional<QuotientData> quotient() const override;
  std::optional<ExtensionStructure> extension_structure() const override;
  bool certified_torsion_free() const override;

  const PolycyclicPresentation& n_presentation() const { return *n_pres_; }
  const ModelPtr& lambda_model() const { return lambda_; }
  std::size_t n_gen_count() const { return n_pres_->gen_set()->size(); }

  /// Checks phi(g) . phi(g^-1) = id on the basis and that action images
  /// respect the grading (stratum-h generators map into strata >= h).
  ActionCheck verify_action() const;

  /// Images of the N basis under conjugation by lambda (cached per lambda).
  std::shared_ptr<const std::vector<ExpVec>> action_of(const Element& lambda,
                                                       const Word& lambda_word) const;
  /// Applies a cached action to an exponent vector.
  ExpVec apply_action(const std::vector<ExpVec>& images, const ExpVec& v) const;

  std::pair<std::size_t, bool> split_gen(std::size_t gen_index) const;

 private:
  ExpVec act_by_gen(std::size_t lambda_gen, const ExpVec& v) const;

  std::shared_ptr<const PolycyclicPresentation> n_pres_;
  ModelPtr lambda_;
  std::vector<std::vector<ExpVec>> action_;
  std::size_t n_gens_;

  struct ActionCache {
    std::map<std::string, std::shared_ptr<const std::vector<ExpVec>>> images;
    std::deque<std::string> order;
    std::size_t max_entries = 1u << 16;
    std::mutex mutex;
  };
  mutable ActionCache cache_;
};

/// The odd-prime family Z_p x| Z with the generator of Z acting as squaring
/// on Z_p. Generators: first pair is the Z_p generator, second the Z shift.
class ModPExtensionModel final
    : public GroupModel,
      public std::enable_shared_from_this<ModPExtensionModel> {
 public:
  ModPExtensionModel(unsigned long p, GenSetPtr gens);

  std::string kind() const override { return "mod_p_extension"; }
  Element identity() const override;
  Element generator_image(std::size_t gen_index) const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& g) const override;
  std::string canonical_key(const Element& g) const override;
  std::optional<QuotientData> quotient() const override;
  std::optional<ExtensionStructure> extension_structure() const override;

  unsigned long p() const { return p_; }

 private:
  unsigned long pow2(const mpz_class& n) const;  // 2^n mod p
  unsigned long p_;
  unsigned long order_of_2_;  // multiplicative order of 2 mod p
};

/// g^e by binary powering through the model's multiply/inverse.
Element model_power(const GroupModel& model, const Element& g, const mpz_class& e);

/// Builds a rewriting view over any ambient model: declare which ambient
/// generators span N (with their N-basis meaning), supply the quotient model
/// and the projection of the remaining generators; the action words are
/// derived by conjugating in the ambient model and decomposing over N.
ExtensionStructure make_extension_structure(
    ModelPtr ambient, std::shared_ptr<const PolycyclicPresentation> n_basis,
    const std::vector<std::optional<std::pair<std::size_t, int>>>& b1_of_gen,
    ModelPtr lambda, const std::vector<std::size_t>& lambda_gen_of_s0,
    std::size_t decompose_budget = 1u << 20);

/// Graded-series verification: for a polycyclic presentation checks the
/// conjugation table (commutators land in higher strata); for a split
/// extension additionally checks the action. Violations are report content.
GradedReport verify_graded_series(const PolycyclicPresentation& pres);
GradedReport verify_graded_series(const SplitExtensionModel& ext);

}  // namespace growthlab
