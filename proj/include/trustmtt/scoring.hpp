#pragma once

// Log-likelihood-ratio track scoring: initial score, hit/miss increments,
// score-to-probability transform, and the SPRT-style status thresholds.

#include <cmath>
#include <stdexcept>

#include "trustmtt/common.hpp"

namespace trustmtt {

struct ScoringParams {
  double p_d = 0.9;        // detection probability used by the scorer
  double beta_fp = 1e-6;   // false-positive density per unit volume
  double beta_nt = 1e-9;   // new-target density per unit volume
  int eta = 2;             // measurement dimensions
  double alpha_err = 1e-6; // Type-I error rate
  double beta_err = 1e-2;  // Type-II error rate
  double gate_chi2 = 9.21; // chi-square(eta) gate on d^2, 99% for eta = 2

  double t2() const { return std::log((1.0 - beta_err) / alpha_err); }
  double t1() const { return std::log(beta_err / (1.0 - alpha_err)); }

  void validate() const {
    if (p_d <= 0.0 || p_d >= 1.0) throw std::invalid_argument("scoring: p_d must be in (0,1)");
    if (beta_fp <= 0.0) throw std::invalid_argument("scoring: beta_fp must be > 0");
    if (beta_nt <= 0.0) throw std::invalid_argument("scoring: beta_nt must be > 0");
    if (eta < 1) throw std::invalid_argument("scoring: eta must be >= 1");
    if (alpha_err <= 0.0 || alpha_err >= 1.0 || beta_err <= 0.0 || beta_err >= 1.0)
      throw std::invalid_argument("scoring: alpha/beta error rates must be in (0,1)");
    if (gate_chi2 <= 0.0) throw std::invalid_argument("scoring: gate_chi2 must be > 0");
    if (!(t1() < 0.0 && 0.0 < t2()))
      throw std::invalid_argument("scoring: thresholds require alpha, beta < 0.5");
  }
};

enum class TrackStatus { Tentative, Confirmed, Deleted };

inline double init_score(const ScoringParams& p) {
  return std::log(p.p_d * p.beta_nt / p.beta_fp);
}

inline double score_update_miss(double score, const ScoringParams& p) {
  if (p.p_d >= 1.0) throw std::invalid_argument("score_update_miss: p_d = 1 is degenerate");
  return score + std::log(1.0 - p.p_d);
}

inline double hit_gain(double d2, double det_s, const ScoringParams& p) {
  if (det_s <= 0.0) throw std::invalid_argument("hit_gain: innovation covariance not SPD");
  return std::log(p.p_d / (std::pow(2.0 * M_PI, p.eta / 2.0) * p.beta_fp * std::sqrt(det_s))) -
         0.5 * d2;
}

inline double score_update_hit(double score, double d2, const Mat2& innov_cov,
                               const ScoringParams& p) {
  if (d2 < 0.0) throw std::invalid_argument("score_update_hit: d2 must be >= 0");
  Eigen::LLT<Mat2> llt(innov_cov);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("score_update_hit: innovation covariance not SPD");
  return score + hit_gain(d2, innov_cov.determinant(), p);
}

inline double score_to_prob(double score) {
  // logistic, written to avoid overflow on either tail
  if (score >= 0.0) return 1.0 / (1.0 + std::exp(-score));
  const double e = std::exp(score);
  return e / (1.0 + e);
}

inline double prob_to_score(double prob) {
  if (prob <= 0.0 || prob >= 1.0) throw std::invalid_argument("prob_to_score: prob must be in (0,1)");
  return std::log(prob / (1.0 - prob));
}

inline TrackStatus track_status(double score, const ScoringParams& p) {
  if (score >= p.t2()) return TrackStatus::Confirmed;
  if (score <= p.t1()) return TrackStatus::Deleted;
  return TrackStatus::Tentative;
}

}  // namespace trustmtt
