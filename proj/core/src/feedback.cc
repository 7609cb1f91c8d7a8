#include "auctionlearn/feedback.h"

#include <algorithm>
#include <string>

#include "auctionlearn/errors.h"

namespace auctionlearn {
namespace {

bool contains(const ActionSet& set, ActionIndex k) {
  return std::binary_search(set.begin(), set.end(), k);
}

RevelationProbs passthrough(std::span<const double> w) {
  return RevelationProbs(w.begin(), w.end());
}

}  // namespace

void validate_revelation(std::span<const double> w, std::span<const double> r) {
  if (w.size() != r.size()) throw InvalidRevelation("revelation vector has the wrong length");
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (r[k] < w[k] - 1e-12 || r[k] > 1.0 + 1e-12) {
      throw InvalidRevelation("r[" + std::to_string(k) + "]=" + std::to_string(r[k]) +
                              " outside [" + std::to_string(w[k]) + ", 1]");
    }
  }
}

RevelationProbs revelation_simple(std::span<const double> w, const ActionSet& losing,
                                  bool won) {
  RevelationProbs r = passthrough(w);
  if (won) return r;
  double mass = 0.0;
  for (ActionIndex j : losing) mass += w[j];
  for (ActionIndex k : losing) r[k] = mass;
  return r;
}

RevelationProbs revelation_general(std::span<const double> w, const ActionSet& losing,
                                   const ActionSet& all_losing,
                                   std::span<const ActionSet> reveal_sets, bool won) {
  RevelationProbs r = passthrough(w);
  if (won) return r;
  if (!std::includes(all_losing.begin(), all_losing.end(), losing.begin(), losing.end())) {
    throw InvalidRevelation("observed losing set is not a subset of the full losing set");
  }
  for (ActionIndex k : losing) {
    double mass = 0.0;
    for (ActionIndex j : reveal_sets[k]) {
      if (contains(all_losing, j)) mass += w[j];
    }
    r[k] = mass;
  }
  return r;
}

RevelationProbs revelation_heuristic(std::span<const double> w,
                                     const ActionSet& losing,
                                     std::span<const ActionSet> reveal_sets,
                                     const ActionSet& historical_winners, bool won) {
  RevelationProbs r = passthrough(w);
  if (won) return r;
  for (ActionIndex k : losing) {
    double mass = w[k];
    for (ActionIndex j : reveal_sets[k]) {
      if (j != k && !contains(historical_winners, j)) mass += w[j];
    }
    r[k] = std::min(mass, 1.0);
  }
  return r;
}

void WinnerHistory::record(ActionIndex played, double allocation) {
  ++played_.at(played);
  if (allocation > 0.0) ++won_[played];
}

ActionSet WinnerHistory::winners() const {
  ActionSet out;
  for (ActionIndex k = 0; k < played_.size(); ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

void AlphaAccumulator::record(std::span<const double> w, std::span<const double> r) {
  validate_revelation(w, r);
  for (std::size_t k = 0; k < w.size(); ++k) {
    // 1 / alpha_t^k; r == w covers the w = 0 corner.
    inverse_sum_ += r[k] == w[k] ? 1.0 : w[k] / r[k];
  }
  ++rounds_;
}

double AlphaAccumulator::finalize() const {
  if (rounds_ == 0) throw BadAlpha("no rounds recorded");
  const double k = static_cast<double>(num_actions_);
  const double alpha = (static_cast<double>(rounds_) * k) / inverse_sum_;
  return std::clamp(alpha, 1.0, k);
}

}  // namespace auctionlearn
