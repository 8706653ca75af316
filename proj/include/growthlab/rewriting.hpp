#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "growthlab/analytics.hpp"
#include "growthlab/models.hpp"
#include "growthlab/spectra.hpp"

namespace growthlab {

struct RewriteBudget {
  /// Cap on the intermediate length |nu| + |sigma| + remaining letters.
  mpz_class max_intermediate = mpz_class("1000000000000000000");
  std::size_t max_collection_steps = 100'000'000;
};

/// Instrumentation of one rewrite: input length R, collected N-prefix length
/// s (exponent-sum), S0-suffix length t <= R, conjugation count, and the peak
/// intermediate length.
struct RewriteTrace {
  std::size_t input_length = 0;
  mpz_class prefix_length = 0;   // s
  std::size_t suffix_length = 0; // t
  std::size_t conjugations = 0;
  mpz_class max_intermediate = 0;
};

struct PushRightResult {
  ExpVec n_part;  // nu, collected over the N basis
  Word s0_part;   // sigma, the S0 subsequence in original order
  RewriteTrace trace;
};

struct CollectResult {
  ExpVec n_part;                         // alpha
  std::vector<mpz_class> tau_exponents;  // a_1..a_m, tau_i from the graded basis
  std::size_t coset_index = 1;           // 1-based, 1 = identity coset
  std::size_t coset_count = 1;
  RewriteTrace trace;
};

struct CosetResult {
  PcWord f_word;               // phi as a concatenated letter sequence, |phi| <= K R
  ExpVec f_part;               // phi collected over the N basis
  std::size_t coset_index = 1; // l with w = phi . beta_l
  std::size_t coset_count = 1;
  std::size_t table_constant = 0;  // K
};

/// Rewriting engine over an extension view. Conjugation actions of S0
/// prefixes factor through Lambda, so they are memoized per Lambda element;
/// correctness never depends on cache hits. The cache honors
/// GROWTHLAB_CACHE_MB and is safe for concurrent use.
class Rewriter {
 public:
  explicit Rewriter(ExtensionStructure ext);

  const ExtensionStructure& structure() const { return ext_; }

  /// Moves every N letter left through the word: w = nu . sigma as group
  /// elements, sigma the S0 subsequence of w in original order, nu built by
  /// the conjugation cascade of the S0 prefixes.
  PushRightResult push_right(const Word& w, const RewriteBudget& budget = {}) const;

  /// Full graded normal form w = alpha . tau_m^{a_m} ... tau_1^{a_1} . beta_q
  /// for a polycyclic Lambda whose leading torsion generators enumerate the
  /// coset directions and whose tail is the graded basis of the nilpotent
  /// finite-index subgroup.
  CollectResult collect_normal_form(const Word& w, const RewriteBudget& budget = {}) const;

  /// Lemma-style coset form w = phi . beta_l for finite Lambda: the letters
  /// of w are swept right through precomputed transposition tables, so
  /// |phi| <= K |w| with K the table constant.
  CosetResult coset_normal_form(const Word& w, std::size_t lambda_cap = 10'000) const;

  /// Evaluates (n_part over N) * (word) in the ambient model; the soundness
  /// check "evaluate(input) = evaluate(nu) * evaluate(sigma)" uses this.
  Element evaluate_split(const ExpVec& n_part, const Word& s0_part) const;

 private:
  struct CosetTables;
  std::shared_ptr<const std::vector<ExpVec>> action_of(const Element& lambda,
                                                       const Word& lambda_word) const;
  ExpVec apply_images(const std::vector<ExpVec>& images, std::size_t basis,
                      int sign, CollectionBudget* counter) const;
  const CosetTables& coset_tables(std::size_t lambda_cap) const;

  ExtensionStructure ext_;
  std::size_t tau_start_ = 0;  // first non-torsion Lambda basis index

  mutable std::map<std::string, std::shared_ptr<const std::vector<ExpVec>>> cache_;
  mutable std::deque<std::string> cache_order_;
  mutable std::size_t cache_entry_cap_ = 0;
  mutable std::mutex cache_mutex_;
  mutable std::shared_ptr<const CosetTables> coset_tables_;
  mutable std::mutex coset_mutex_;
};

struct PrefixGrowthOptions {
  std::size_t min_length = 5;
  std::size_t max_length = 40;
  std::size_t samples = 40;
  std::uint64_t seed = 1;
  /// Adds, per length, the deterministic words g^k alpha g^(R-1-k) for every
  /// S0 generator g and N basis letter alpha. The quantity of interest is a
  /// worst case over words, which uniform sampling alone underestimates.
  bool extremal_probes = true;
  RewriteBudget budget;
};

struct PrefixGrowthRow {
  std::size_t length = 0;
  mpz_class s_max = 0;
  std::size_t t_max = 0;
  std::size_t conjugations_max = 0;
  mpz_class max_intermediate = 0;
};

struct PrefixGrowthReport {
  bool screened = false;  // the nilpotency screen passed; bounds are claimed
  ScreenReport screen;
  std::vector<PrefixGrowthRow> rows;
  PolynomialBoundFit fit;   // log-log fit of s_max over the length window
  double semilog_slope = 0.0;
  PrefixGrowthOptions options;  // echoed, seed included
};

/// Samples random words per length, records the maximal collected prefix
/// length from push_right, and fits its growth. With a failed screen the
/// report is emitted in unscreened mode (data only, no bound claim).
PrefixGrowthReport measure_prefix_growth(const Rewriter& rewriter,
                                         const PrefixGrowthOptions& opts = {});

}  // namespace growthlab
