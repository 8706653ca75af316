#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "growthlab/words.hpp"

namespace growthlab {

/// Exponent vector: entry i is the exponent of basis element i in the normal
/// form alpha_1^e1 ... alpha_n^en. Torsion coordinates are kept in [0, m).
using ExpVec = std::vector<mpz_class>;

struct PcGenerator {
  std::string label;
  std::string inverse_label;         // equal to label marks a self-inverse generator
  std::optional<mpz_class> modulus;  // order of the cyclic factor (torsion)
};

/// A letter over the polycyclic basis: basis index and sign.
struct PcLetter {
  std::size_t basis = 0;
  int sign = 1;
};
using PcWord = std::vector<PcLetter>;

/// Step counter threaded through collection so callers can bound the work and
/// instrument rewriting traces.
struct CollectionBudget {
  std::size_t steps = 0;
  std::size_t max_steps = 200'000'000;
  void tick();
};

struct GradedViolation {
  std::string description;
};

struct GradedReport {
  bool ok = true;
  std::vector<GradedViolation> violations;
};

/// Polycyclic presentation on a graded basis: ordered basis elements with
/// optional torsion moduli, strata given as consecutive index ranges, and a
/// conjugation table mapping (i, sign, j) with i < j to the word for
/// alpha_i^{sign} alpha_j alpha_i^{-sign}.
///
/// Products are computed by collection: letters are moved into basis order and
/// the table supplies the corrections. Normal forms (exponent vectors) are
/// unique element representatives. Immutable after construction.
class PolycyclicPresentation {
 public:
  using ConjugationTable = std::map<std::tuple<std::size_t, int, std::size_t>, PcWord>;

  PolycyclicPresentation(std::vector<PcGenerator> basis,
                         std::vector<std::pair<std::size_t, std::size_t>> strata,
                         ConjugationTable conjugation);

  std::size_t rank() const { return basis_.size(); }
  std::size_t stratum_count() const { return strata_.size(); }
  /// 0-based stratum of a basis element.
  std::size_t stratum_of(std::size_t basis_index) const { return stratum_of_.at(basis_index); }
  std::pair<std::size_t, std::size_t> stratum_range(std::size_t h) const { return strata_.at(h); }
  const std::optional<mpz_class>& modulus(std::size_t i) const { return basis_.at(i).modulus; }
  bool is_torsion(std::size_t i) const { return basis_.at(i).modulus.has_value(); }
  bool stratum_has_torsion(std::size_t h) const;
  bool torsion_free() const;
  const PcGenerator& generator(std::size_t i) const { return basis_.at(i); }

  /// Flattened symmetric generating set: for each basis element its label and,
  /// when distinct, its inverse label.
  const GenSetPtr& gen_set() const { return gen_set_; }
  /// Basis index and sign denoted by a generating-set index.
  std::pair<std::size_t, int> letter_of_gen(std::size_t gen_index) const;
  /// Generating-set index of alpha_i^{sign}.
  std::size_t gen_of_basis(std::size_t basis_index, int sign) const;

  ExpVec identity_vector() const { return ExpVec(rank(), mpz_class(0)); }
  ExpVec unit(std::size_t basis_index, const mpz_class& exp) const;

  ExpVec multiply(const ExpVec& u, const ExpVec& v, CollectionBudget* budget = nullptr) const;
  ExpVec power(const ExpVec& u, const mpz_class& e, CollectionBudget* budget = nullptr) const;
  ExpVec inverse(const ExpVec& u, CollectionBudget* budget = nullptr) const;

  bool is_identity_vector(const ExpVec& v) const;

  /// Collects a word over the generating set into normal form.
  ExpVec word_to_vector(const Word& w, CollectionBudget* budget = nullptr) const;
  /// Collects a basis-letter word into normal form.
  ExpVec collect(const PcWord& w, CollectionBudget* budget = nullptr) const;

  /// Word length proxy: sum over coordinates of |e_i|, with torsion
  /// coordinates measured as cyclic distance min(e, m - e).
  mpz_class exponent_sum(const ExpVec& v) const;

  std::string key_of(const ExpVec& v) const;

  /// Checks that every conjugation entry is graded: the conjugate of a
  /// stratum-h basis element must be that element followed by letters in
  /// strata > h. Violations are report content, not errors.
  GradedReport verify_graded() const;

 private:
  struct Entry {
    PcWord word;
    ExpVec normal_form;     // empty until computed
    bool usable = false;    // support lies past the conjugating index
  };

  const Entry* find_entry(std::size_t k, int sign, std::size_t p) const;
  const ExpVec& entry_nf(std::size_t k, int sign, std::size_t p) const;

  ExpVec mul_window(const ExpVec& u, const ExpVec& v, std::size_t k,
                    CollectionBudget* budget) const;
  ExpVec pow_window(const ExpVec& u, const mpz_class& e, std::size_t k,
                    CollectionBudget* budget) const;
  ExpVec inv_window(const ExpVec& u, std::size_t k, CollectionBudget* budget) const;
  /// alpha_k^e x alpha_k^{-e} for x supported past k.
  ExpVec conj_power(const ExpVec& x, std::size_t k, const mpz_class& e,
                    CollectionBudget* budget) const;
  using Automorphism = std::vector<ExpVec>;  // images of basis elements past k
  ExpVec apply_aut(const Automorphism& images, const ExpVec& x, std::size_t k,
                   CollectionBudget* budget) const;
  void reduce_coord(ExpVec& v, std::size_t i) const;
  void validate_automorphisms();

  std::vector<PcGenerator> basis_;
  std::vector<std::pair<std::size_t, std::size_t>> strata_;
  std::vector<std::size_t> stratum_of_;
  std::map<std::tuple<std::size_t, int, std::size_t>, Entry> table_;
  GenSetPtr gen_set_;
  std::vector<std::pair<std::size_t, int>> letter_of_gen_;
  std::vector<std::array<std::size_t, 2>> gen_of_basis_;  // [sign<0, sign>0]
};

}  // namespace growthlab
