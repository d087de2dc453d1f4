#pragma once

// Constant-velocity Kalman filtering over [x, y, vx, vy] with position-only
// measurements, plus Mahalanobis gating.

#include <stdexcept>

#include "trustmtt/common.hpp"
#include "trustmtt/scoring.hpp"

namespace trustmtt {

inline Mat4 cv_transition(double dt) {
  Mat4 f = Mat4::Identity();
  f(0, 2) = dt;
  f(1, 3) = dt;
  return f;
}

// Continuous white-noise acceleration, intensity q per axis.
inline Mat4 cv_process_noise(double dt, double q) {
  Mat4 qm = Mat4::Zero();
  const double d3 = dt * dt * dt / 3.0;
  const double d2 = dt * dt / 2.0;
  qm(0, 0) = qm(1, 1) = q * d3;
  qm(2, 2) = qm(3, 3) = q * dt;
  qm(0, 2) = qm(2, 0) = q * d2;
  qm(1, 3) = qm(3, 1) = q * d2;
  return qm;
}

inline Eigen::Matrix<double, 2, 4> position_h() {
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  return h;
}

inline void kf_predict(Vec4& mean, Mat4& cov, double dt, double q) {
  if (dt < 0.0) throw std::invalid_argument("kf_predict: dt must be >= 0");
  const Mat4 f = cv_transition(dt);
  mean = f * mean;
  cov = f * cov * f.transpose() + cv_process_noise(dt, q);
}

struct GateResult {
  Vec2 residual = Vec2::Zero();
  Mat2 innov_cov = Mat2::Identity();
  double mahalanobis_sq = 0.0;
  bool passes = false;
};

inline GateResult gate(const Vec4& mean, const Mat4& cov, const Vec2& z, const Mat2& r,
                       const ScoringParams& p) {
  const auto h = position_h();
  GateResult g;
  g.residual = z - h * mean;
  g.innov_cov = h * cov * h.transpose() + r;
  Eigen::LLT<Mat2> llt(g.innov_cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gate: singular innovation covariance");
  g.mahalanobis_sq = g.residual.dot(llt.solve(g.residual));
  g.passes = g.mahalanobis_sq <= p.gate_chi2;
  return g;
}

// Joseph-form update; returns the innovation statistics actually applied.
inline GateResult kf_update(Vec4& mean, Mat4& cov, const Vec2& z, const Mat2& r,
                            const ScoringParams& p) {
  const auto h = position_h();
  GateResult g = gate(mean, cov, z, r, p);
  const Eigen::Matrix<double, 4, 2> k =
      cov * h.transpose() * g.innov_cov.inverse();
  mean += k * g.residual;
  const Mat4 ikh = Mat4::Identity() - k * h;
  cov = ikh * cov * ikh.transpose() + k * r * k.transpose();
  return g;
}

}  // namespace trustmtt
