#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "growthlab/models.hpp"

namespace growthlab {

struct BallOptions {
  std::size_t cap_elements = 10'000'000;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Census of a word-metric ball: cumulative and sphere counts per radius.
struct BallCensus {
  std::string model_kind;
  std::string genset_fingerprint;
  std::size_t r_max = 0;  // requested radius
  std::vector<std::size_t> cumulative;
  std::vector<std::size_t> sphere;
  bool truncated = false;
};

/// Full ball enumeration: elements, radii, and the key index. Enumeration
/// order is deterministic and independent of the thread count (frontier
/// products are merged in frontier-major, generator-minor order before
/// deduplication, so radius attribution never races).
class Ball {
 public:
  const ModelPtr& model() const { return model_; }
  std::size_t size() const { return elements_.size(); }
  const Element& element(std::size_t i) const { return elements_.at(i); }
  std::uint32_t radius(std::size_t i) const { return radii_.at(i); }
  std::optional<std::size_t> find(const std::string& key) const;

  std::size_t completed_radius() const { return cumulative_.size() - 1; }
  bool truncated() const { return truncated_; }
  /// True when the frontier emptied: the whole group was enumerated.
  bool closed() const { return closed_; }
  const std::vector<std::size_t>& cumulative() const { return cumulative_; }

  BallCensus census() const;

 private:
  friend Ball enumerate_ball_with(ModelPtr, std::vector<Element>, std::size_t,
                                  const BallOptions&);
  ModelPtr model_;
  std::size_t requested_r_max_ = 0;
  std::vector<Element> elements_;
  std::vector<std::uint32_t> radii_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::size_t> cumulative_;  // cumulative_[r], r <= completed
  bool truncated_ = false;
  bool closed_ = false;
};

/// Breadth-first closure of the identity under right multiplication by the
/// model's generating set, deduplicated by canonical key.
Ball enumerate_ball(ModelPtr model, std::size_t r_max, const BallOptions& opts = {});

/// Same, with an explicit multiplier set (subgroup balls, quotient images).
/// Identity multipliers are skipped; duplicates are deduplicated by key.
Ball enumerate_ball_with(ModelPtr model, std::vector<Element> multipliers,
                         std::size_t r_max, const BallOptions& opts = {});

/// BFS distance from the identity, or nullopt when g is not found within the
/// radius budget (not-in-ball is a result, not an error).
std::optional<std::size_t> element_length(const ModelPtr& model, const Element& g,
                                          std::size_t radius_budget,
                                          const BallOptions& opts = {});

struct ClosureResult {
  bool finite = false;
  std::size_t order = 0;     // set when finite
  std::size_t enumerated = 0;  // elements seen before stopping
};

/// BFS until no new elements (exact order) or until the element cap; a cap
/// hit is a result, not an error.
ClosureResult enumerate_closure(const ModelPtr& model, std::size_t cap,
                                const BallOptions& opts = {});

struct SandwichReport {
  std::vector<std::size_t> gamma_counts;   // |Gamma(R,S)| cumulative
  std::vector<std::size_t> lambda_counts;  // |Lambda(R, pi(S))| cumulative
  std::size_t kernel_order = 0;
  std::size_t checked_radius = 0;
  bool ok = false;
  std::vector<std::string> violations;
};

/// Verifies |Lambda(R)| <= |Gamma(R)| <= |F| * |Lambda(R)| for every R up to
/// r_max, for a model with a natural quotient of finite kernel F.
SandwichReport quotient_sandwich_check(const ModelPtr& model, std::size_t r_max,
                                       const BallOptions& opts = {},
                                       std::size_t kernel_cap = 1'000'000);

}  // namespace growthlab
