#include "growthlab/ball.hpp"

#include <algorithm>
#include <limits>
#include <thread>

#include "growthlab/errors.hpp"

namespace growthlab {

std::optional<std::size_t> Ball::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

BallCensus Ball::census() const {
  BallCensus c;
  c.model_kind = model_->kind();
  c.genset_fingerprint = model_->gens()->fingerprint();
  c.r_max = requested_r_max_;
  c.cumulative = cumulative_;
  // A closed ball exhausted the group: counts are constant out to the
  // requested radius (guarded against the huge internal radii closure uses).
  if (closed_ && requested_r_max_ < 1'000'000)
    c.cumulative.resize(requested_r_max_ + 1, cumulative_.back());
  c.sphere.resize(c.cumulative.size());
  for (std::size_t r = 0; r < c.cumulative.size(); ++r)
    c.sphere[r] = r == 0 ? c.cumulative[0] : c.cumulative[r] - c.cumulative[r - 1];
  c.truncated = truncated_;
  return c;
}

Ball enumerate_ball_with(ModelPtr model, std::vector<Element> multipliers,
                         std::size_t r_max, const BallOptions& opts) {
  Ball ball;
  ball.model_ = model;
  ball.requested_r_max_ = r_max;

  // Drop identity multipliers and key-duplicates; they cannot change balls.
  std::vector<Element> gens;
  {
    std::vector<std::string> seen;
    const std::string id_key = model->canonical_key(model->identity());
    for (auto& g : multipliers) {
      std::string key = model->canonical_key(g);
      if (key == id_key) continue;
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      gens.push_back(std::move(g));
    }
  }

  Element id = model->identity();
  ball.index_.emplace(model->canonical_key(id), 0);
  ball.elements_.push_back(std::move(id));
  ball.radii_.push_back(0);
  ball.cumulative_.push_back(1);

  if (gens.empty()) {
    ball.closed_ = true;
    return ball;
  }

  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;

  std::vector<std::size_t> frontier{0};
  for (std::size_t r = 1; r <= r_max && !frontier.empty(); ++r) {
    // Expand every frontier element by every multiplier. Work is split into
    // index chunks; results are merged in chunk order so the outcome is
    // independent of scheduling.
    const std::size_t jobs = frontier.size();
    const unsigned used = static_cast<unsigned>(
        std::max<std::size_t>(1, std::min<std::size_t>(threads, (jobs + 63) / 64)));
    std::vector<std::vector<std::pair<std::string, Element>>> chunk_out(used);

    auto expand = [&](std::size_t chunk, std::size_t begin, std::size_t end) {
      auto& out = chunk_out[chunk];
      out.reserve((end - begin) * gens.size());
      for (std::size_t f = begin; f < end; ++f) {
        const Element& base = ball.elements_[frontier[f]];
        for (const auto& g : gens) {
          Element prod = model->multiply(base, g);
          std::string key = model->canonical_key(prod);
          out.emplace_back(std::move(key), std::move(prod));
        }
      }
    };

    if (used <= 1) {
      expand(0, 0, jobs);
    } else {
      std::vector<std::thread> pool;
      const std::size_t per = (jobs + used - 1) / used;
      for (unsigned c = 0; c < used; ++c) {
        const std::size_t begin = c * per;
        const std::size_t end = std::min(jobs, begin + per);
        if (begin >= end) break;
        pool.emplace_back(expand, c, begin, end);
      }
      for (auto& t : pool) t.join();
    }

    const std::size_t size_before = ball.elements_.size();
    std::vector<std::size_t> next;
    bool hit_cap = false;
    for (auto& chunk : chunk_out) {
      for (auto& [key, elem] : chunk) {
        if (ball.index_.contains(key)) continue;
        if (ball.elements_.size() >= opts.cap_elements) {
          hit_cap = true;
          break;
        }
        ball.index_.emplace(key, ball.elements_.size());
        next.push_back(ball.elements_.size());
        ball.elements_.push_back(std::move(elem));
        ball.radii_.push_back(static_cast<std::uint32_t>(r));
      }
      if (hit_cap) break;
    }

    if (hit_cap) {
      // Roll the partial radius back: counts stay exact up to the last
      // complete radius and the truncation flag marks the census.
      for (std::size_t i = size_before; i < ball.elements_.size(); ++i)
        ball.index_.erase(model->canonical_key(ball.elements_[i]));
      ball.elements_.resize(size_before);
      ball.radii_.resize(size_before);
      ball.truncated_ = true;
      return ball;
    }

    if (next.empty()) {
      ball.closed_ = true;
      return ball;
    }
    ball.cumulative_.push_back(ball.elements_.size());
    frontier = std::move(next);
  }
  return ball;
}

Ball enumerate_ball(ModelPtr model, std::size_t r_max, const BallOptions& opts) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < model->gens()->size(); ++i)
    gens.push_back(model->generator_image(i));
  return enumerate_ball_with(std::move(model), std::move(gens), r_max, opts);
}

std::optional<std::size_t> element_length(const ModelPtr& model, const Element& g,
                                          std::size_t radius_budget,
                                          const BallOptions& opts) {
  const std::string target = model->canonical_key(g);
  Ball ball = enumerate_ball(model, radius_budget, opts);
  if (auto idx = ball.find(target)) return ball.radius(*idx);
  return std::nullopt;
}

ClosureResult enumerate_closure(const ModelPtr& model, std::size_t cap,
                                const BallOptions& opts) {
  if (cap < 1) throw parameter_error("enumerate_closure: cap must be >= 1");
  BallOptions o = opts;
  o.cap_elements = cap;
  Ball ball = enumerate_ball(model, std::numeric_limits<std::size_t>::max() - 1, o);
  ClosureResult result;
  result.enumerated = ball.size();
  if (ball.closed()) {
    result.finite = true;
    result.order = ball.size();
  }
  return result;
}

SandwichReport quotient_sandwich_check(const ModelPtr& model, std::size_t r_max,
                                       const BallOptions& opts,
                                       std::size_t kernel_cap) {
  auto q = model->quotient();
  if (!q) throw parameter_error("quotient_sandwich_check: model has no quotient map");

  ClosureResult kernel = enumerate_closure(q->kernel, kernel_cap, opts);
  if (!kernel.finite)
    throw parameter_error(
        "quotient_sandwich_check: kernel is not finite within the cap");

  SandwichReport report;
  report.kernel_order = kernel.order;

  Ball gamma = enumerate_ball(model, r_max, opts);

  std::vector<Element> images;
  for (std::size_t i = 0; i < model->gens()->size(); ++i) {
    if (q->gen_image[i])
      images.push_back(q->quotient->generator_image(*q->gen_image[i]));
  }
  Ball lambda = enumerate_ball_with(q->quotient, std::move(images), r_max, opts);

  // A closed ball (whole group enumerated) has constant counts past its last
  // radius; an open truncated ball limits how far the check can go.
  std::size_t checked = r_max;
  if (!gamma.closed()) checked = std::min(checked, gamma.completed_radius());
  if (!lambda.closed()) checked = std::min(checked, lambda.completed_radius());
  auto count_at = [](const Ball& b, std::size_t r) {
    return r < b.cumulative().size() ? b.cumulative()[r] : b.cumulative().back();
  };
  report.checked_radius = checked;
  for (std::size_t r = 0; r <= checked; ++r) {
    std::size_t gc = count_at(gamma, r);
    std::size_t lc = count_at(lambda, r);
    report.gamma_counts.push_back(gc);
    report.lambda_counts.push_back(lc);
    if (lc > gc)
      report.violations.push_back("radius " + std::to_string(r) +
                                  ": |Lambda| exceeds |Gamma|");
    if (gc > kernel.order * lc)
      report.violations.push_back("radius " + std::to_string(r) +
                                  ": |Gamma| exceeds |F| * |Lambda|");
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace growthlab
