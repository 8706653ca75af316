#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace growthlab {

/// One position in a word: a generator index plus an inversion flag. As a
/// group element, (i, inverted) equals the generator paired with i by the
/// involution of the ambient symmetric generating set.
struct Letter {
  std::size_t index = 0;
  bool inverted = false;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A finite generating set closed under inversion: an ordered label list and
/// an involution pairing each generator with its inverse. Immutable after
/// construction; share via GenSetPtr.
class SymmetricGeneratingSet {
 public:
  static std::shared_ptr<const SymmetricGeneratingSet> create(
      std::vector<std::string> labels, std::vector<std::size_t> involution);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t involution(std::size_t i) const { return involution_.at(i); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  /// Stable content hash; words and censuses use it to detect mismatched sets.
  const std::string& fingerprint() const { return fingerprint_; }

 private:
  SymmetricGeneratingSet() = default;
  std::vector<std::string> labels_;
  std::vector<std::size_t> involution_;
  std::string fingerprint_;
};

using GenSetPtr = std::shared_ptr<const SymmetricGeneratingSet>;

/// A finite sequence of letters over one generating set. Immutable value;
/// operations that combine words check the sets match.
class Word {
 public:
  Word() = default;
  Word(GenSetPtr gens, std::vector<Letter> letters);

  const GenSetPtr& gens() const { return gens_; }
  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  /// Index of the generator this letter denotes as a group element
  /// (involution applied when the inversion flag is set).
  std::size_t element_index(std::size_t pos) const;

  /// Words are equal when they denote the same generator sequence; the raw
  /// inversion flags may differ (a^-1 and its inverse label are one letter).
  friend bool operator==(const Word& a, const Word& b);

 private:
  GenSetPtr gens_;
  std::vector<Letter> letters_;
};

/// Cancels adjacent inverse pairs until none remain. The result is the unique
/// reduced form; letter count never increases and parity is preserved.
Word free_reduce(const Word& w);

/// Reversed sequence with every letter's inversion toggled;
/// free_reduce(concat(w, invert_word(w))) is empty.
Word invert_word(const Word& w);

/// Concatenation followed by free reduction. Throws structural_error when the
/// generating sets differ.
Word concat(const Word& a, const Word& b);

/// Parses the CLI/file word syntax: whitespace-separated labels with an
/// optional trailing ^-1, e.g. "a b^-1 a".
Word parse_word(const GenSetPtr& gens, std::string_view text);

std::string format_word(const Word& w);

}  // namespace growthlab
