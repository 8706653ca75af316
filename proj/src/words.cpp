#include "growthlab/words.hpp"

#include <set>
#include <sstream>

#include "growthlab/errors.hpp"
#include "growthlab/sha256.hpp"

namespace growthlab {

std::shared_ptr<const SymmetricGeneratingSet> SymmetricGeneratingSet::create(
    std::vector<std::string> labels, std::vector<std::size_t> involution) {
  if (labels.size() != involution.size())
    throw structural_error("generating set: label/involution size mismatch");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw structural_error("generating set: empty label");
    if (!seen.insert(l).second)
      throw structural_error("generating set: duplicate label '" + l + "'");
  }
  for (std::size_t i = 0; i < involution.size(); ++i) {
    if (involution[i] >= labels.size())
      throw structural_error("generating set: involution index out of range");
    if (involution[involution[i]] != i)
      throw structural_error("generating set: involution is not an involution at '" +
                             labels[i] + "'");
  }
  auto set = std::shared_ptr<SymmetricGeneratingSet>(new SymmetricGeneratingSet());
  set->labels_ = std::move(labels);
  set->involution_ = std::move(involution);
  std::ostringstream blob;
  for (std::size_t i = 0; i < set->labels_.size(); ++i)
    blob << set->labels_[i] << '\x1f' << set->involution_[i] << '\x1e';
  set->fingerprint_ = sha256_hex(blob.str());
  return set;
}

std::optional<std::size_t> SymmetricGeneratingSet::index_of(
    std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

Word::Word(GenSetPtr gens, std::vector<Letter> letters)
    : gens_(std::move(gens)), letters_(std::move(letters)) {
  if (!gens_) throw structural_error("word: null generating set");
  for (const auto& l : letters_)
    if (l.index >= gens_->size())
      throw structural_error("word: letter index out of range");
}

std::size_t Word::element_index(std::size_t pos) const {
  const Letter& l = letters_.at(pos);
  return l.inverted ? gens_->involution(l.index) : l.index;
}

bool operator==(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  if (!a.gens_ || !b.gens_) return a.letters_ == b.letters_;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.element_index(i) != b.element_index(i)) return false;
  return true;
}

namespace {

bool cancels(const SymmetricGeneratingSet& set, std::size_t elem_a,
             std::size_t elem_b) {
  return set.involution(elem_a) == elem_b;
}

}  // namespace

Word free_reduce(const Word& w) {
  if (!w.gens()) return w;
  const auto& set = *w.gens();
  std::vector<Letter> out;
  std::vector<std::size_t> out_elem;
  out.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t e = w.element_index(i);
    if (!out.empty() && cancels(set, out_elem.back(), e)) {
      out.pop_back();
      out_elem.pop_back();
    } else {
      out.push_back(w.letters()[i]);
      out_elem.push_back(e);
    }
  }
  return Word(w.gens(), std::move(out));
}

Word invert_word(const Word& w) {
  if (!w.gens()) return w;
  std::vector<Letter> out;
  out.reserve(w.size());
  for (std::size_t i = w.size(); i-- > 0;) {
    Letter l = w.letters()[i];
    l.inverted = !l.inverted;
    out.push_back(l);
  }
  return Word(w.gens(), std::move(out));
}

Word concat(const Word& a, const Word& b) {
  if (!a.gens()) return b;
  if (!b.gens()) return a;
  if (a.gens()->fingerprint() != b.gens()->fingerprint())
    throw structural_error("concat: words over different generating sets");
  std::vector<Letter> joined = a.letters();
  joined.insert(joined.end(), b.letters().begin(), b.letters().end());
  return free_reduce(Word(a.gens(), std::move(joined)));
}

Word parse_word(const GenSetPtr& gens, std::string_view text) {
  if (!gens) throw structural_error("parse_word: null generating set");
  std::vector<Letter> letters;
  std::string token;
  std::istringstream in{std::string(text)};
  while (in >> token) {
    bool inverted = false;
    if (token.size() > 3 && token.ends_with("^-1")) {
      inverted = true;
      token.resize(token.size() - 3);
    }
    auto idx = gens->index_of(token);
    if (!idx)
      throw structural_error("parse_word: unknown generator '" + token + "'");
    letters.push_back(Letter{*idx, inverted});
  }
  return Word(gens, std::move(letters));
}

std::string format_word(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    const Letter& l = w.letters()[i];
    out += w.gens()->label(l.index);
    if (l.inverted) out += "^-1";
  }
  return out;
}

}  // namespace growthlab
