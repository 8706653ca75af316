#include "growthlab/rewriting.hpp"

#include <cstdlib>
#include <random>

#include "growthlab/errors.hpp"
#include "growthlab/util.hpp"

namespace growthlab {

namespace {

std::size_t cache_entries_from_env(std::size_t rank) {
  std::size_t mb = 64;
  if (const char* env = std::getenv("GROWTHLAB_CACHE_MB")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') mb = v;
  }
  const std::size_t bytes_per_entry = 96 * std::max<std::size_t>(rank, 1) + 128;
  return std::max<std::size_t>(16, mb * 1024 * 1024 / bytes_per_entry);
}

}  // namespace

Rewriter::Rewriter(ExtensionStructure ext) : ext_(std::move(ext)) {
  if (!ext_.ambient || !ext_.lambda || !ext_.n_basis)
    throw structural_error("rewriter: incomplete extension structure");
  cache_entry_cap_ = cache_entries_from_env(ext_.n_basis->rank());

  // The collect form needs Lambda polycyclic with all torsion generators in
  // front (coset directions) and the graded tail torsion-free.
  if (auto poly = std::dynamic_pointer_cast<const PolycyclicModel>(ext_.lambda)) {
    const auto& pres = poly->presentation();
    tau_start_ = 0;
    while (tau_start_ < pres.rank() && pres.is_torsion(tau_start_)) ++tau_start_;
  }
}

std::shared_ptr<const std::vector<ExpVec>> Rewriter::action_of(
    const Element& lambda, const Word& lambda_word) const {
  const std::string key = ext_.lambda->canonical_key(lambda);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const auto& pres = *ext_.n_basis;
  auto images = std::make_shared<std::vector<ExpVec>>();
  images->reserve(pres.rank());
  for (std::size_t p = 0; p < pres.rank(); ++p) images->push_back(pres.unit(p, 1));
  // phi(l1 ... lu) = phi(l1) o ... o phi(lu): fold right to left through the
  // per-generator action tables.
  for (std::size_t i = lambda_word.size(); i-- > 0;) {
    const std::size_t g = lambda_word.element_index(i);
    const auto& row = ext_.action.at(g);
    for (auto& img : *images) {
      ExpVec out = pres.identity_vector();
      for (std::size_t p = 0; p < img.size(); ++p) {
        if (img[p] == 0) continue;
        out = pres.multiply(out, pres.power(row[p], img[p]));
      }
      img = std::move(out);
    }
  }
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (cache_.size() >= cache_entry_cap_ && !cache_order_.empty()) {
      cache_.erase(cache_order_.front());
      cache_order_.pop_front();
    }
    if (cache_.emplace(key, images).second) cache_order_.push_back(key);
  }
  return images;
}

ExpVec Rewriter::apply_images(const std::vector<ExpVec>& images, std::size_t basis,
                              int sign, CollectionBudget* counter) const {
  const auto& pres = *ext_.n_basis;
  if (sign > 0) return images[basis];
  return pres.inverse(images[basis], counter);
}

PushRightResult Rewriter::push_right(const Word& w, const RewriteBudget& budget) const {
  if (w.gens() && w.gens()->fingerprint() != ext_.ambient->gens()->fingerprint())
    throw structural_error("push_right: word over a different generating set");
  const auto& pres = *ext_.n_basis;

  CollectionBudget counter;
  counter.max_steps = budget.max_collection_steps;

  PushRightResult result;
  result.trace.input_length = w.size();
  result.n_part = pres.identity_vector();

  std::vector<Letter> sigma;
  Element lambda_prefix = ext_.lambda->identity();
  std::vector<Letter> lambda_letters;
  std::shared_ptr<const std::vector<ExpVec>> images;

  mpz_class peak = w.size();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t e = w.element_index(i);
    const auto& b1 = ext_.b1_of_gen.at(e);
    if (b1) {
      ExpVec img;
      if (sigma.empty()) {
        img = pres.unit(b1->first, b1->second);
      } else {
        if (!images)
          images = action_of(lambda_prefix, Word(ext_.lambda->gens(), lambda_letters));
        img = apply_images(*images, b1->first, b1->second, &counter);
        ++result.trace.conjugations;
      }
      result.n_part = pres.multiply(result.n_part, img, &counter);
    } else {
      auto it = std::find(ext_.s0_gens.begin(), ext_.s0_gens.end(), e);
      if (it == ext_.s0_gens.end())
        throw structural_error("push_right: letter outside B1 and S0");
      const std::size_t lg = ext_.lambda_gen_of_s0[it - ext_.s0_gens.begin()];
      sigma.push_back(w.letters()[i]);
      lambda_letters.push_back(Letter{lg, false});
      lambda_prefix =
          ext_.lambda->multiply(lambda_prefix, ext_.lambda->generator_image(lg));
      images.reset();
    }
    mpz_class intermediate = pres.exponent_sum(result.n_part) +
                             mpz_class(static_cast<unsigned long>(sigma.size())) +
                             mpz_class(static_cast<unsigned long>(w.size() - i - 1));
    if (intermediate > peak) peak = intermediate;
    if (intermediate > budget.max_intermediate)
      throw resource_error("push_right: intermediate length budget exceeded at letter " +
                           std::to_string(i));
  }

  result.s0_part = Word(ext_.ambient->gens(), std::move(sigma));
  result.trace.suffix_length = result.s0_part.size();
  result.trace.prefix_length = pres.exponent_sum(result.n_part);
  result.trace.max_intermediate = peak;
  return result;
}

Element Rewriter::evaluate_split(const ExpVec& n_part, const Word& s0_part) const {
  Element n_elem = ext_.evaluate_n(n_part);
  return ext_.ambient->multiply(n_elem, ext_.ambient->evaluate_word(s0_part));
}

CollectResult Rewriter::collect_normal_form(const Word& w,
                                            const RewriteBudget& budget) const {
  auto poly = std::dynamic_pointer_cast<const PolycyclicModel>(ext_.lambda);
  if (!poly)
    throw parameter_error(
        "collect_normal_form: requires a polycyclic Lambda model");
  const auto& lpres = poly->presentation();
  for (std::size_t i = tau_start_; i < lpres.rank(); ++i)
    if (lpres.is_torsion(i))
      throw parameter_error(
          "collect_normal_form: torsion Lambda generators must precede the graded basis");

  PushRightResult pushed = push_right(w, budget);

  CollectionBudget counter;
  counter.max_steps = budget.max_collection_steps;

  // Lambda part in normal form: lambda = s^p tau^e with the torsion prefix
  // s^p enumerating cosets of the nilpotent tail subgroup H = <tau>.
  Word lambda_word = ext_.lambda_word_of(pushed.s0_part);
  ExpVec lambda_vec = lpres.word_to_vector(lambda_word, &counter);

  ExpVec beta_vec = lpres.identity_vector();
  for (std::size_t i = 0; i < tau_start_; ++i) beta_vec[i] = lambda_vec[i];

  // h = lambda beta^{-1} lies in H (H is normal: conjugation tables only point
  // down the basis); the descending tau form of h reads off the inverse.
  ExpVec h = lpres.multiply(lambda_vec, lpres.inverse(beta_vec, &counter), &counter);
  for (std::size_t i = 0; i < tau_start_; ++i)
    if (h[i] != 0)
      throw math_error("collect_normal_form: coset decomposition failed");
  ExpVec h_inv = lpres.inverse(h, &counter);

  CollectResult result;
  const std::size_t m = lpres.rank() - tau_start_;
  result.tau_exponents.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    result.tau_exponents[i] = -h_inv[tau_start_ + i];

  // Coset index: mixed radix over the torsion prefix exponents, 1-based.
  std::size_t q = 0;
  std::size_t scale = 1;
  std::size_t count = 1;
  for (std::size_t i = 0; i < tau_start_; ++i) {
    const std::size_t mod = lpres.modulus(i)->get_ui();
    q += beta_vec[i].get_ui() * scale;
    scale *= mod;
    count *= mod;
  }
  result.coset_index = q + 1;
  result.coset_count = count;

  // Ambient lift of tau_m^{a_m} ... tau_1^{a_1} beta_q, then
  // alpha = w * lift^{-1}, decomposed over the N basis.
  auto lift_of_lambda_gen = [&](std::size_t lambda_gen) -> std::size_t {
    for (std::size_t i = 0; i < ext_.s0_gens.size(); ++i)
      if (ext_.lambda_gen_of_s0[i] == lambda_gen) return ext_.s0_gens[i];
    throw presentation_error("collect_normal_form: Lambda generator without a lift");
  };
  Element tail = ext_.ambient->identity();
  for (std::size_t i = m; i-- > 0;) {
    const std::size_t basis = tau_start_ + i;
    const std::size_t gen = lift_of_lambda_gen(lpres.gen_of_basis(basis, 1));
    tail = ext_.ambient->multiply(
        tail, model_power(*ext_.ambient, ext_.ambient->generator_image(gen),
                          result.tau_exponents[i]));
  }
  for (std::size_t i = 0; i < tau_start_; ++i) {
    if (beta_vec[i] == 0) continue;
    const std::size_t gen = lift_of_lambda_gen(lpres.gen_of_basis(i, 1));
    tail = ext_.ambient->multiply(
        tail, model_power(*ext_.ambient, ext_.ambient->generator_image(gen),
                          beta_vec[i]));
  }

  Element alpha = ext_.ambient->multiply(ext_.ambient->evaluate_word(w),
                                         ext_.ambient->inverse(tail));
  auto vec = ext_.decompose_n(alpha);
  if (!vec)
    throw math_error(
        "collect_normal_form: correction term is not expressible over N");
  result.n_part = std::move(*vec);

  result.trace = pushed.trace;
  result.trace.conjugations += counter.steps;
  result.trace.prefix_length = ext_.n_basis->exponent_sum(result.n_part);
  return result;
}

// ---------------------------------------------------------------------------
// Coset normal form for finite Lambda

struct Rewriter::CosetTables {
  std::vector<Element> reps;        // Lambda elements, BFS order, reps[0] = e
  std::vector<Word> lifts;          // ambient lift word per rep
  std::vector<std::string> keys;    // Lambda canonical keys
  // per coset l, per ambient generator g: correction word over the N basis
  // and the successor coset (for S0 letters).
  std::vector<std::vector<PcWord>> correction;
  std::vector<std::vector<std::size_t>> successor;
  std::size_t table_constant = 0;
};

const Rewriter::CosetTables& Rewriter::coset_tables(std::size_t lambda_cap) const {
  std::lock_guard<std::mutex> lock(coset_mutex_);
  if (coset_tables_) return *coset_tables_;

  auto tables = std::make_shared<CosetTables>();
  const auto& lambda = *ext_.lambda;

  // BFS over Lambda with ambient lift words (deterministic order).
  tables->reps.push_back(lambda.identity());
  tables->lifts.push_back(Word(ext_.ambient->gens(), {}));
  tables->keys.push_back(lambda.canonical_key(lambda.identity()));
  std::size_t scan = 0;
  while (scan < tables->reps.size()) {
    const std::size_t end = tables->reps.size();
    for (; scan < end; ++scan) {
      for (std::size_t i = 0; i < ext_.s0_gens.size(); ++i) {
        Element next = lambda.multiply(
            tables->reps[scan], lambda.generator_image(ext_.lambda_gen_of_s0[i]));
        std::string key = lambda.canonical_key(next);
        bool known = false;
        for (const auto& k : tables->keys) known = known || k == key;
        if (known) continue;
        if (tables->reps.size() >= lambda_cap)
          throw parameter_error(
              "coset_normal_form: Lambda is not finite within the cap");
        std::vector<Letter> lift = tables->lifts[scan].letters();
        lift.push_back(Letter{ext_.s0_gens[i], false});
        tables->reps.push_back(std::move(next));
        tables->lifts.push_back(Word(ext_.ambient->gens(), std::move(lift)));
        tables->keys.push_back(std::move(key));
      }
    }
  }

  const std::size_t c = tables->reps.size();
  const std::size_t gens = ext_.ambient->gens()->size();
  tables->correction.assign(c, std::vector<PcWord>(gens));
  tables->successor.assign(c, std::vector<std::size_t>(gens, 0));

  auto to_pcword = [&](const ExpVec& v) {
    PcWord out;
    for (std::size_t p = 0; p < v.size(); ++p) {
      if (v[p] == 0) continue;
      mpz_class e = v[p];
      // torsion coordinates: use the short direction
      if (ext_.n_basis->is_torsion(p)) {
        const mpz_class& mod = *ext_.n_basis->modulus(p);
        if (e > mod / 2) e -= mod;
      }
      const int sign = e > 0 ? 1 : -1;
      mpz_class reps_count = e > 0 ? e : mpz_class(-e);
      for (mpz_class i = 0; i < reps_count; ++i) out.push_back(PcLetter{p, sign});
    }
    return out;
  };

  for (std::size_t l = 0; l < c; ++l) {
    Element lift = ext_.ambient->evaluate_word(tables->lifts[l]);
    Element lift_inv = ext_.ambient->inverse(lift);
    for (std::size_t g = 0; g < gens; ++g) {
      Element gen = ext_.ambient->generator_image(g);
      if (ext_.b1_of_gen[g]) {
        // beta_l x = (beta_l x beta_l^{-1}) beta_l
        Element conj = ext_.ambient->multiply(ext_.ambient->multiply(lift, gen),
                                              lift_inv);
        auto vec = ext_.decompose_n(conj);
        if (!vec)
          throw presentation_error(
              "coset_normal_form: transposition table entry not expressible over N");
        tables->correction[l][g] = to_pcword(*vec);
        tables->successor[l][g] = l;
      } else {
        // beta_l gamma = alpha . beta_{l'}
        auto it = std::find(ext_.s0_gens.begin(), ext_.s0_gens.end(), g);
        const std::size_t lg = ext_.lambda_gen_of_s0[it - ext_.s0_gens.begin()];
        Element next = lambda.multiply(tables->reps[l], lambda.generator_image(lg));
        std::string key = lambda.canonical_key(next);
        std::size_t l_next = c;
        for (std::size_t j = 0; j < c; ++j)
          if (tables->keys[j] == key) {
            l_next = j;
            break;
          }
        if (l_next == c)
          throw math_error("coset_normal_form: closure miss in the coset table");
        Element corr = ext_.ambient->multiply(
            ext_.ambient->multiply(lift, gen),
            ext_.ambient->inverse(ext_.ambient->evaluate_word(tables->lifts[l_next])));
        auto vec = ext_.decompose_n(corr);
        if (!vec)
          throw presentation_error(
              "coset_normal_form: transposition table entry not expressible over N");
        tables->correction[l][g] = to_pcword(*vec);
        tables->successor[l][g] = l_next;
      }
    }
  }

  for (const auto& row : tables->correction)
    for (const auto& word : row)
      tables->table_constant = std::max(tables->table_constant, word.size());
  tables->table_constant = std::max<std::size_t>(tables->table_constant, 1);

  coset_tables_ = tables;
  return *coset_tables_;
}

CosetResult Rewriter::coset_normal_form(const Word& w, std::size_t lambda_cap) const {
  const CosetTables& tables = coset_tables(lambda_cap);
  CosetResult result;
  result.coset_count = tables.reps.size();
  result.table_constant = tables.table_constant;

  std::size_t l = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t g = w.element_index(i);
    const PcWord& corr = tables.correction.at(l).at(g);
    result.f_word.insert(result.f_word.end(), corr.begin(), corr.end());
    l = tables.successor[l][g];
  }
  result.coset_index = l + 1;
  result.f_part = ext_.n_basis->collect(result.f_word);
  return result;
}

// ---------------------------------------------------------------------------

PrefixGrowthReport measure_prefix_growth(const Rewriter& rewriter,
                                         const PrefixGrowthOptions& opts) {
  if (opts.min_length < 1 || opts.max_length < opts.min_length + 2)
    throw parameter_error("measure_prefix_growth: bad length window");

  const auto& ext = rewriter.structure();
  PrefixGrowthReport report;
  report.options = opts;
  report.screen = virtual_nilpotency_screen(ext);
  report.screened = report.screen.pass;

  const std::size_t gen_count = ext.ambient->gens()->size();
  std::mt19937_64 rng(opts.seed);

  for (std::size_t len = opts.min_length; len <= opts.max_length; ++len) {
    PrefixGrowthRow row;
    row.length = len;
    auto feed = [&](const Word& w) {
      PushRightResult pr = rewriter.push_right(w, opts.budget);
      if (pr.trace.prefix_length > row.s_max) row.s_max = pr.trace.prefix_length;
      row.t_max = std::max(row.t_max, pr.trace.suffix_length);
      row.conjugations_max = std::max(row.conjugations_max, pr.trace.conjugations);
      if (pr.trace.max_intermediate > row.max_intermediate)
        row.max_intermediate = pr.trace.max_intermediate;
    };
    for (std::size_t s = 0; s < opts.samples; ++s) {
      std::vector<Letter> letters;
      letters.reserve(len);
      for (std::size_t i = 0; i < len; ++i)
        letters.push_back(Letter{uniform_below(rng, gen_count), false});
      feed(Word(ext.ambient->gens(), std::move(letters)));
    }
    if (opts.extremal_probes && len >= 2) {
      const std::size_t k = (len - 1 + 1) / 2;
      for (std::size_t g : ext.s0_gens) {
        for (std::size_t b = 0; b < ext.n_basis->rank(); ++b) {
          std::vector<Letter> letters;
          for (std::size_t i = 0; i < k; ++i) letters.push_back(Letter{g, false});
          letters.push_back(Letter{ext.ambient_gen_of_basis[b], false});
          for (std::size_t i = 0; i + k + 1 < len; ++i)
            letters.push_back(Letter{g, false});
          feed(Word(ext.ambient->gens(), std::move(letters)));
        }
      }
    }
    report.rows.push_back(std::move(row));
  }

  std::vector<double> values(opts.max_length + 1, 0.0);
  for (const auto& row : report.rows)
    values[row.length] = std::max(1e-9, mpz_get_d(row.s_max.get_mpz_t()));
  report.fit = fit_polynomial_degree(values, opts.min_length, opts.max_length);
  report.semilog_slope = semilog_slope(values, opts.min_length, opts.max_length);
  return report;
}

}  // namespace growthlab
