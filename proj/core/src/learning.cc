#include "auctionlearn/learning.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "auctionlearn/errors.h"

namespace auctionlearn {
namespace {

constexpr double kProbabilitySlack = 1e-12;

// Normalizes log-weights in place and writes the matching probabilities.
void normalize_logs(std::vector<double>& log_w, std::vector<double>& w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  if (!std::isfinite(top)) {
    throw NumericalUnderflow("all MWU weights collapsed");
  }
  w.resize(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    w[i] = std::exp(log_w[i] - top);
    total += w[i];
  }
  const double log_total = std::log(total);
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    w[i] /= total;
    log_w[i] = (log_w[i] - top) - log_total;
  }
}

}  // namespace

std::string_view to_string(FeedbackMode mode) {
  switch (mode) {
    case FeedbackMode::kFullInformation: return "full_information";
    case FeedbackMode::kBandit: return "bandit";
    case FeedbackMode::kExtendedTrue: return "extended_true";
    case FeedbackMode::kExtendedHeuristic: return "extended_heuristic";
  }
  return "?";
}

MixedStrategy uniform_strategy(std::size_t num_actions) {
  return MixedStrategy(num_actions, 1.0 / static_cast<double>(num_actions));
}

MixedStrategy mwu_update(std::span<const double> w, std::span<const double> loss,
                         double eta) {
  if (!(eta > 0.0)) throw ConfigError("learning rate must be positive");
  if (w.size() != loss.size()) throw ConfigError("strategy and loss sizes differ");
  std::vector<double> log_w(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    log_w[i] = (w[i] > 0.0 ? std::log(w[i]) : -std::numeric_limits<double>::infinity()) -
               eta * loss[i];
  }
  MixedStrategy out;
  normalize_logs(log_w, out);
  return out;
}

ActionIndex sample_action(std::span<const double> w, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  ActionIndex last_positive = 0;
  for (ActionIndex k = 0; k < w.size(); ++k) {
    if (w[k] <= 0.0) continue;
    last_positive = k;
    cumulative += w[k];
    if (u < cumulative) return k;
  }
  // u landed in the rounding gap above the cumulative sum.
  return last_positive;
}

LossEstimate estimate_full(std::span<const double> counterfactual_losses) {
  return LossEstimate(counterfactual_losses.begin(), counterfactual_losses.end());
}

LossEstimate estimate_bandit(ActionIndex played, double realized_loss,
                             std::span<const double> w) {
  if (played >= w.size()) throw ConfigError("played action out of range");
  if (!(w[played] > 0.0)) {
    throw InvalidRevelation("played action has zero probability");
  }
  LossEstimate out(w.size(), 0.0);
  out[played] = realized_loss / w[played];
  return out;
}

LossEstimate estimate_extended(const RoundOutcome& outcome, double loser_loss,
                               std::span<const double> revelation,
                               std::span<const double> w) {
  if (revelation.size() != w.size()) {
    throw InvalidRevelation("revelation vector has the wrong length");
  }
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (revelation[k] < w[k] - kProbabilitySlack ||
        revelation[k] > 1.0 + kProbabilitySlack) {
      throw InvalidRevelation("revelation probability r[" + std::to_string(k) +
                              "]=" + std::to_string(revelation[k]) +
                              " outside [w[k], 1] with w[k]=" + std::to_string(w[k]));
    }
  }
  if (const auto* won = std::get_if<Won>(&outcome)) {
    return estimate_bandit(won->played, won->loss, w);
  }
  const auto& lost = std::get<Lost>(outcome);
  if (!std::binary_search(lost.losing_set.begin(), lost.losing_set.end(), lost.played)) {
    throw InvalidRevelation("losing set does not contain the played action");
  }
  LossEstimate out(w.size(), 0.0);
  for (ActionIndex k : lost.losing_set) {
    if (k >= w.size()) throw InvalidRevelation("losing set index out of range");
    if (!(revelation[k] > 0.0)) {
      throw InvalidRevelation("losing action with zero revelation probability");
    }
    out[k] = loser_loss / revelation[k];
  }
  return out;
}

double default_eta(FeedbackMode mode, std::size_t num_actions, std::size_t horizon,
                   double alpha_hat) {
  if (num_actions < 2) throw ConfigError("default learning rate needs K >= 2");
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  const double k = static_cast<double>(num_actions);
  const double t = static_cast<double>(horizon);
  const double log_k = std::log(k);
  switch (mode) {
    case FeedbackMode::kFullInformation:
      return std::sqrt(8.0 * log_k / t);
    case FeedbackMode::kBandit:
      return std::sqrt(2.0 * log_k / (k * t));
    case FeedbackMode::kExtendedTrue:
    case FeedbackMode::kExtendedHeuristic:
      if (!(alpha_hat >= 1.0 && alpha_hat <= k)) {
        throw BadAlpha("alpha_hat=" + std::to_string(alpha_hat) + " outside [1, " +
                       std::to_string(num_actions) + "]");
      }
      return std::sqrt(2.0 * alpha_hat * log_k / (k * t));
  }
  return 0.0;
}

Learner::Learner(std::size_t num_actions, double eta)
    : eta_(eta),
      log_w_(num_actions, -std::log(static_cast<double>(num_actions))),
      w_(uniform_strategy(num_actions)) {
  if (num_actions == 0) throw ConfigError("learner needs at least one action");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ConfigError("learning rate must be positive");
  }
}

void Learner::update(std::span<const double> loss_estimate) {
  if (loss_estimate.size() != log_w_.size()) {
    throw ConfigError("loss estimate has the wrong length");
  }
  for (std::size_t i = 0; i < log_w_.size(); ++i) log_w_[i] -= eta_ * loss_estimate[i];
  normalize_logs(log_w_, w_);
}

}  // namespace auctionlearn
