#include "growthlab/polycyclic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "growthlab/errors.hpp"

namespace growthlab {

void CollectionBudget::tick() {
  if (++steps > max_steps)
    throw resource_error("collection step budget exceeded (" +
                         std::to_string(max_steps) + " steps)");
}

PolycyclicPresentation::PolycyclicPresentation(
    std::vector<PcGenerator> basis,
    std::vector<std::pair<std::size_t, std::size_t>> strata,
    ConjugationTable conjugation)
    : basis_(std::move(basis)), strata_(std::move(strata)) {
  const std::size_t n = basis_.size();

  if (strata_.empty() && n > 0)
    throw structural_error("polycyclic: no strata given");
  std::size_t expect = 0;
  stratum_of_.assign(n, 0);
  for (std::size_t h = 0; h < strata_.size(); ++h) {
    auto [first, last] = strata_[h];
    if (first != expect || last < first || last >= n)
      throw structural_error("polycyclic: strata must be consecutive index ranges");
    for (std::size_t i = first; i <= last; ++i) stratum_of_[i] = h;
    expect = last + 1;
  }
  if (expect != n)
    throw structural_error("polycyclic: strata do not cover the basis");

  for (const auto& g : basis_) {
    if (g.modulus && *g.modulus < 2)
      throw structural_error("polycyclic: modulus must be >= 2 for '" + g.label + "'");
    if (g.label == g.inverse_label && (!g.modulus || *g.modulus != 2))
      throw structural_error("polycyclic: self-inverse generator '" + g.label +
                             "' requires modulus 2");
  }

  // Flattened symmetric generating set.
  std::vector<std::string> labels;
  std::vector<std::size_t> involution;
  gen_of_basis_.assign(n, {0, 0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = labels.size();
    labels.push_back(basis_[i].label);
    if (basis_[i].inverse_label == basis_[i].label) {
      involution.push_back(pos);
      letter_of_gen_.push_back({i, 1});
      gen_of_basis_[i] = {pos, pos};
    } else {
      labels.push_back(basis_[i].inverse_label);
      involution.push_back(pos + 1);
      involution.push_back(pos);
      letter_of_gen_.push_back({i, 1});
      letter_of_gen_.push_back({i, -1});
      gen_of_basis_[i] = {pos + 1, pos};
    }
  }
  gen_set_ = SymmetricGeneratingSet::create(std::move(labels), std::move(involution));

  for (auto& [key, word] : conjugation) {
    auto [k, sign, p] = key;
    if (k >= p || p >= n || (sign != 1 && sign != -1))
      throw structural_error("polycyclic: bad conjugation key");
    Entry e;
    e.word = std::move(word);
    e.usable = true;
    for (const auto& l : e.word) {
      if (l.basis >= n || (l.sign != 1 && l.sign != -1))
        throw structural_error("polycyclic: bad letter in conjugation entry");
      if (l.basis <= k) e.usable = false;  // cannot be used by collection
    }
    table_.emplace(key, std::move(e));
  }

  // Normal forms for usable entries; recursion only requests entries at
  // strictly larger conjugating indices, so this terminates.
  for (auto& [key, entry] : table_) {
    if (!entry.usable) continue;
    if (entry.normal_form.empty())
      entry.normal_form = collect(entry.word, nullptr);
  }

  validate_automorphisms();
}

bool PolycyclicPresentation::stratum_has_torsion(std::size_t h) const {
  auto [first, last] = strata_.at(h);
  for (std::size_t i = first; i <= last; ++i)
    if (is_torsion(i)) return true;
  return false;
}

bool PolycyclicPresentation::torsion_free() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (is_torsion(i)) return false;
  return true;
}

std::pair<std::size_t, int> PolycyclicPresentation::letter_of_gen(
    std::size_t gen_index) const {
  return letter_of_gen_.at(gen_index);
}

std::size_t PolycyclicPresentation::gen_of_basis(std::size_t basis_index,
                                                 int sign) const {
  return gen_of_basis_.at(basis_index)[sign > 0 ? 1 : 0];
}

void PolycyclicPresentation::reduce_coord(ExpVec& v, std::size_t i) const {
  if (!basis_[i].modulus) return;
  const mpz_class& m = *basis_[i].modulus;
  mpz_class r = v[i] % m;
  if (r < 0) r += m;
  v[i] = r;
}

ExpVec PolycyclicPresentation::unit(std::size_t basis_index,
                                    const mpz_class& exp) const {
  ExpVec v = identity_vector();
  v.at(basis_index) = exp;
  reduce_coord(v, basis_index);
  return v;
}

const PolycyclicPresentation::Entry* PolycyclicPresentation::find_entry(
    std::size_t k, int sign, std::size_t p) const {
  auto it = table_.find({k, sign, p});
  return it == table_.end() ? nullptr : &it->second;
}

const ExpVec& PolycyclicPresentation::entry_nf(std::size_t k, int sign,
                                               std::size_t p) const {
  const Entry* e = find_entry(k, sign, p);
  if (!e)
    throw presentation_error("conjugation table missing entry for " +
                             basis_[k].label + (sign > 0 ? "^1 " : "^-1 ") +
                             basis_[p].label);
  if (!e->usable)
    throw presentation_error("conjugation entry for " + basis_[k].label +
                             (sign > 0 ? "^1 " : "^-1 ") + basis_[p].label +
                             " is not supported past the conjugating index");
  return e->normal_form;
}

ExpVec PolycyclicPresentation::apply_aut(const Automorphism& images,
                                         const ExpVec& x, std::size_t k,
                                         CollectionBudget* budget) const {
  ExpVec out = identity_vector();
  for (std::size_t p = k + 1; p < rank(); ++p) {
    if (x[p] == 0) continue;
    out = mul_window(out, pow_window(images[p], x[p], k + 1, budget), k + 1, budget);
  }
  return out;
}

ExpVec PolycyclicPresentation::conj_power(const ExpVec& x, std::size_t k,
                                          const mpz_class& e,
                                          CollectionBudget* budget) const {
  bool trivial = true;
  for (std::size_t p = k + 1; p < rank(); ++p)
    if (x[p] != 0) {
      trivial = false;
      break;
    }
  if (trivial || e == 0) return x;

  mpz_class exp = e;
  if (basis_[k].modulus) {
    exp %= *basis_[k].modulus;
    if (exp < 0) exp += *basis_[k].modulus;
    if (exp == 0) return x;
  }
  const int sign = exp > 0 ? 1 : -1;
  mpz_class reps = exp > 0 ? exp : mpz_class(-exp);

  // Base automorphism: images of every basis element past k under
  // conjugation by alpha_k^{sign}.
  Automorphism base(rank());
  for (std::size_t p = k + 1; p < rank(); ++p) {
    if (budget) budget->tick();
    base[p] = entry_nf(k, sign, p);
  }

  // Binary powering of the automorphism, then one application to x.
  Automorphism acc;  // identity until first use
  auto compose = [&](const Automorphism& a, const Automorphism& b) {
    Automorphism out(rank());
    for (std::size_t p = k + 1; p < rank(); ++p)
      out[p] = apply_aut(a, b[p], k, budget);
    return out;
  };
  while (reps > 0) {
    if (mpz_tstbit(reps.get_mpz_t(), 0)) {
      acc = acc.empty() ? base : compose(acc, base);
    }
    reps >>= 1;
    if (reps > 0) base = compose(base, base);
  }
  return apply_aut(acc, x, k, budget);
}

ExpVec PolycyclicPresentation::mul_window(const ExpVec& u, const ExpVec& v,
                                          std::size_t k,
                                          CollectionBudget* budget) const {
  if (k >= rank()) return identity_vector();
  // Find the lowest touched coordinate to skip straight to it.
  std::size_t lead = k;
  while (lead < rank() && u[lead] == 0 && v[lead] == 0) ++lead;
  if (lead == rank()) return identity_vector();

  ExpVec u_tail = u;
  for (std::size_t i = 0; i <= lead; ++i) u_tail[i] = 0;
  ExpVec v_tail = v;
  for (std::size_t i = 0; i <= lead; ++i) v_tail[i] = 0;

  // u = a^{u_l} u', v = a^{v_l} v'  =>  u v = a^{u_l+v_l} (a^{-v_l} u' a^{v_l}) v'
  if (budget) budget->tick();
  ExpVec conj = conj_power(u_tail, lead, -v[lead], budget);
  ExpVec rest = mul_window(conj, v_tail, lead + 1, budget);
  rest[lead] = u[lead] + v[lead];
  reduce_coord(rest, lead);
  return rest;
}

ExpVec PolycyclicPresentation::pow_window(const ExpVec& u, const mpz_class& e,
                                          std::size_t k,
                                          CollectionBudget* budget) const {
  if (e == 0) return identity_vector();
  ExpVec base = e > 0 ? u : inv_window(u, k, budget);
  mpz_class reps = e > 0 ? e : mpz_class(-e);
  ExpVec acc = identity_vector();
  bool acc_set = false;
  while (reps > 0) {
    if (mpz_tstbit(reps.get_mpz_t(), 0)) {
      acc = acc_set ? mul_window(acc, base, k, budget) : base;
      acc_set = true;
    }
    reps >>= 1;
    if (reps > 0) base = mul_window(base, base, k, budget);
  }
  return acc;
}

ExpVec PolycyclicPresentation::inv_window(const ExpVec& u, std::size_t k,
                                          CollectionBudget* budget) const {
  std::size_t lead = k;
  while (lead < rank() && u[lead] == 0) ++lead;
  if (lead == rank()) return identity_vector();

  ExpVec u_tail = u;
  u_tail[lead] = 0;
  // (a^{e} u')^{-1} = a^{-e} (a^{e} u'^{-1} a^{-e})
  ExpVec inv_tail = inv_window(u_tail, lead + 1, budget);
  ExpVec res = conj_power(inv_tail, lead, u[lead], budget);
  res[lead] = -u[lead];
  reduce_coord(res, lead);
  return res;
}

ExpVec PolycyclicPresentation::multiply(const ExpVec& u, const ExpVec& v,
                                        CollectionBudget* budget) const {
  if (u.size() != rank() || v.size() != rank())
    throw structural_error("polycyclic multiply: exponent vector of wrong rank");
  return mul_window(u, v, 0, budget);
}

ExpVec PolycyclicPresentation::power(const ExpVec& u, const mpz_class& e,
                                     CollectionBudget* budget) const {
  if (u.size() != rank())
    throw structural_error("polycyclic power: exponent vector of wrong rank");
  return pow_window(u, e, 0, budget);
}

ExpVec PolycyclicPresentation::inverse(const ExpVec& u,
                                       CollectionBudget* budget) const {
  if (u.size() != rank())
    throw structural_error("polycyclic inverse: exponent vector of wrong rank");
  return inv_window(u, 0, budget);
}

bool PolycyclicPresentation::is_identity_vector(const ExpVec& v) const {
  for (const auto& e : v)
    if (e != 0) return false;
  return true;
}

ExpVec PolycyclicPresentation::word_to_vector(const Word& w,
                                              CollectionBudget* budget) const {
  if (w.gens() && w.gens()->fingerprint() != gen_set_->fingerprint())
    throw structural_error("polycyclic: word over a different generating set");
  ExpVec acc = identity_vector();
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto [basis, sign] = letter_of_gen_.at(w.element_index(i));
    acc = multiply(acc, unit(basis, sign), budget);
  }
  return acc;
}

ExpVec PolycyclicPresentation::collect(const PcWord& w,
                                       CollectionBudget* budget) const {
  ExpVec acc = identity_vector();
  for (const auto& l : w)
    acc = multiply(acc, unit(l.basis, l.sign), budget);
  return acc;
}

mpz_class PolycyclicPresentation::exponent_sum(const ExpVec& v) const {
  mpz_class total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (basis_[i].modulus) {
      mpz_class alt = *basis_[i].modulus - v[i];
      total += std::min(v[i], alt);
    } else {
      total += abs(v[i]);
    }
  }
  return total;
}

std::string PolycyclicPresentation::key_of(const ExpVec& v) const {
  std::ostringstream out;
  out << 'P';
  for (const auto& e : v) out << ' ' << e.get_str();
  return out.str();
}

void PolycyclicPresentation::validate_automorphisms() {
  // Every listed pair must have both signs and compose to the identity on the
  // conjugated element, and must respect torsion orders.
  for (const auto& [key, entry] : table_) {
    auto [k, sign, p] = key;
    if (!entry.usable) continue;
    const Entry* other = find_entry(k, -sign, p);
    if (!other)
      throw presentation_error("conjugation entry for " + basis_[k].label +
                               " on " + basis_[p].label +
                               " given for one sign only");
    if (!other->usable) continue;
    if (sign != 1) continue;  // check each pair once
    ExpVec forward = entry.normal_form;
    // alpha_k^{-1} (alpha_k alpha_p alpha_k^{-1}) alpha_k must be alpha_p.
    ExpVec back = conj_power(forward, k, mpz_class(-1), nullptr);
    if (back != unit(p, 1))
      throw presentation_error("conjugation by " + basis_[k].label +
                               " is not an automorphism at " + basis_[p].label);
    if (basis_[p].modulus) {
      ExpVec pw = pow_window(forward, *basis_[p].modulus, k + 1, nullptr);
      if (!is_identity_vector(pw))
        throw presentation_error("conjugation by " + basis_[k].label +
                                 " breaks the order of " + basis_[p].label);
    }
  }
}

GradedReport PolycyclicPresentation::verify_graded() const {
  GradedReport report;
  for (const auto& [key, entry] : table_) {
    auto [k, sign, p] = key;
    const std::size_t hp = stratum_of_[p];
    const std::string conj_text = basis_[k].label + (sign > 0 ? "" : "^-1") +
                                  " " + basis_[p].label + " " +
                                  basis_[k].label + (sign > 0 ? "^-1" : "");
    if (entry.word.empty() || entry.word.front().basis != p ||
        entry.word.front().sign != 1) {
      report.violations.push_back(
          {"conjugate " + conj_text + " is not written as " + basis_[p].label +
           " times higher-strata letters"});
      continue;
    }
    for (std::size_t idx = 1; idx < entry.word.size(); ++idx) {
      const auto& l = entry.word[idx];
      if (stratum_of_[l.basis] <= hp) {
        report.violations.push_back(
            {"commutator [" + basis_[k].label + (sign > 0 ? "" : "^-1") + ", " +
             basis_[p].label + "] contains " + basis_[l.basis].label +
             " in stratum " + std::to_string(stratum_of_[l.basis] + 1) +
             ", expected strata >= " + std::to_string(hp + 2)});
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace growthlab
