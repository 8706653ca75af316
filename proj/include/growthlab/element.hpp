#pragma once

#include <memory>
#include <variant>

#include "growthlab/errors.hpp"
#include "growthlab/polycyclic.hpp"
#include "growthlab/rational_matrix.hpp"
#include "growthlab/words.hpp"

namespace growthlab {

struct ElementRep;

/// Immutable group element handle. The concrete representation depends on the
/// model that produced it; models reject elements of the wrong kind.
class Element {
 public:
  Element() = default;
  explicit Element(std::shared_ptr<const ElementRep> rep) : rep_(std::move(rep)) {}

  bool valid() const { return rep_ != nullptr; }
  const ElementRep& rep() const;

 private:
  std::shared_ptr<const ElementRep> rep_;
};

/// Split-extension element (n, lambda). lambda_word is a word over the
/// Lambda-factor generators evaluating to lambda; it is bookkeeping for the
/// conjugation-action cache, never part of equality or canonical keys.
struct ExtElem {
  ExpVec n;
  Element lambda;
  Word lambda_word;
};

/// Element (a mod p, shift) of Z_p x| Z with (a,n)(b,m) = (a + 2^n b, n+m).
struct ModPElem {
  unsigned long residue = 0;
  mpz_class shift = 0;
};

struct ElementRep {
  std::variant<RationalMatrix, ExpVec, ExtElem, ModPElem> value;
};

inline const ElementRep& Element::rep() const {
  if (!rep_) throw structural_error("use of an empty element");
  return *rep_;
}

template <typename T>
Element make_element(T value) {
  auto rep = std::make_shared<ElementRep>();
  rep->value = std::move(value);
  return Element(std::move(rep));
}

template <typename T>
const T& element_as(const Element& e) {
  const T* p = std::get_if<T>(&e.rep().value);
  if (!p) throw structural_error("element has the wrong representation for this model");
  return *p;
}

}  // namespace growthlab
