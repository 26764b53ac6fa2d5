#include "leeway/forcefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "leeway/error.hpp"
#include "leeway/log.hpp"

namespace leeway {

namespace {
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kLog2Pi = 1.8378770664093453;
}  // namespace

void GpHyperparams::validate() const {
  if (!(signal_std > 0.0) || !std::isfinite(signal_std))
    throw DomainError("GpHyperparams.signal_std must be > 0");
  if (!(noise_std > 0.0) || !std::isfinite(noise_std))
    throw DomainError("GpHyperparams.noise_std must be > 0");
  if (!(length_scale >= 1.0 && length_scale <= 1e5))
    throw DomainError("GpHyperparams.length_scale must be in [1, 1e5] m");
}

double matern32(double r, const GpHyperparams& h) {
  if (r < 0.0) throw DomainError("matern32: negative distance");
  const double a = kSqrt3 * r / h.length_scale;
  return h.signal_std * h.signal_std * (1.0 + a) * std::exp(-a);
}

Vec2 VortexField::query(const LocalPoint& p) const {
  const Vec2 d = p - center_;
  const double r = d.norm();
  if (r < 1e-12) return {0.0, 0.0};
  const double mag = (r < 1.0) ? strength_ : strength_ / r;
  return d.perp() * (mag / r);
}

namespace gp_detail {

void build_kernel_matrix(std::span<const LocalPoint> points,
                         const GpHyperparams& h, Eigen::MatrixXd& out,
                         Exec exec) {
  const auto n = static_cast<Eigen::Index>(points.size());
  out.resize(n, n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j)
        out(i, j) = matern32(distance(points[i], points[j]), h);
    }
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j)
        out(i, j) = matern32(distance(points[i], points[j]), h);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out(i, j) = out(j, i);
}

void kernel_vector(const LocalPoint& p, std::span<const LocalPoint> points,
                   const GpHyperparams& h, Eigen::VectorXd& out) {
  const auto n = static_cast<Eigen::Index>(points.size());
  out.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out(i) = matern32(distance(p, points[i]), h);
}

}  // namespace gp_detail

GpForceMap GpForceMap::fit(const std::vector<ForceSample>& samples,
                           const GpHyperparams& h, Exec exec) {
  h.validate();
  if (samples.empty()) throw DomainError("fit_gp: empty training set");
  if (samples.size() > kMaxTrainingPoints)
    throw FitError("fit_gp: training set exceeds " +
                   std::to_string(kMaxTrainingPoints) +
                   " points (dense factorization cap)");
  const SourceKind src = samples.front().source;
  for (const auto& s : samples) {
    if (s.source != src)
      throw DomainError("fit_gp: samples mix wind and current sources");
    if (!s.position.finite() || !s.vector.finite())
      throw DomainError("fit_gp: non-finite sample");
    if (s.vector.norm() > 60.0)
      throw DomainError("fit_gp: sample magnitude exceeds 60 m/s sanity bound");
  }

  GpForceMap map;
  map.hyper_ = h;
  map.source_ = src;
  map.points_.reserve(samples.size());
  const auto n = static_cast<Eigen::Index>(samples.size());
  map.targets_.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    map.points_.push_back(samples[static_cast<std::size_t>(i)].position);
    map.targets_(i, 0) = samples[static_cast<std::size_t>(i)].vector.x;
    map.targets_(i, 1) = samples[static_cast<std::size_t>(i)].vector.y;
  }

  Eigen::MatrixXd kmat;
  gp_detail::build_kernel_matrix(map.points_, h, kmat, exec);
  kmat.diagonal().array() += h.noise_std * h.noise_std;

  Eigen::LLT<Eigen::MatrixXd> llt(kmat);
  if (llt.info() != Eigen::Success)
    throw FitError(
        "fit_gp: kernel matrix factorization failed (ill-conditioned); "
        "increase noise_std");
  map.chol_l_ = llt.matrixL();
  map.alpha_ = llt.solve(map.targets_);

  // log marginal likelihood, summed over the two components
  const double logdet_half = map.chol_l_.diagonal().array().log().sum();
  double lml = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double fit_term = map.targets_.col(c).dot(map.alpha_.col(c));
    lml += -0.5 * fit_term - logdet_half - 0.5 * static_cast<double>(n) * kLog2Pi;
  }
  map.lml_ = lml;
  return map;
}

GpPrediction GpForceMap::predict(const LocalPoint& p) const {
  Eigen::VectorXd kstar;
  gp_detail::kernel_vector(p, points_, hyper_, kstar);
  const double mean_x = kstar.dot(alpha_.col(0));
  const double mean_y = kstar.dot(alpha_.col(1));
  // latent variance: k(0) - k*^T (K + s_n^2 I)^-1 k*, shared by both components
  const Eigen::VectorXd v =
      chol_l_.triangularView<Eigen::Lower>().solve(kstar);
  const double prior = hyper_.signal_std * hyper_.signal_std;
  const double var = std::max(0.0, prior - v.squaredNorm());
  return {{mean_x, mean_y}, {var, var}};
}

std::vector<GpPrediction> GpForceMap::predict_batch(
    std::span<const LocalPoint> query, Exec exec) const {
  std::vector<GpPrediction> out(query.size());
  const auto m = static_cast<std::ptrdiff_t>(query.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < m; ++i)
      out[static_cast<std::size_t>(i)] = predict(query[static_cast<std::size_t>(i)]);
  } else {
    for (std::ptrdiff_t i = 0; i < m; ++i)
      out[static_cast<std::size_t>(i)] = predict(query[static_cast<std::size_t>(i)]);
  }
  return out;
}

GpHyperparams default_hyperparams(const std::vector<ForceSample>& samples) {
  if (samples.empty()) throw DomainError("default_hyperparams: no samples");
  // pooled standard deviation over both components
  double sum = 0.0;
  for (const auto& s : samples) sum += s.vector.x + s.vector.y;
  const double mean = sum / (2.0 * static_cast<double>(samples.size()));
  double ss = 0.0;
  for (const auto& s : samples) {
    ss += (s.vector.x - mean) * (s.vector.x - mean);
    ss += (s.vector.y - mean) * (s.vector.y - mean);
  }
  const double stddev =
      std::sqrt(ss / std::max(1.0, 2.0 * static_cast<double>(samples.size()) - 1.0));

  Vec2 lo = samples.front().position, hi = lo;
  for (const auto& s : samples) {
    lo.x = std::min(lo.x, s.position.x);
    lo.y = std::min(lo.y, s.position.y);
    hi.x = std::max(hi.x, s.position.x);
    hi.y = std::max(hi.y, s.position.y);
  }
  const double diag = (hi - lo).norm();

  GpHyperparams h;
  h.signal_std = std::max(stddev, 1e-3);
  h.length_scale = std::clamp(diag / 4.0, 1.0, 1e5);
  h.noise_std = 0.1 * h.signal_std;
  return h;
}

GpHyperparams fit_hyperparams(const std::vector<ForceSample>& samples,
                              const std::vector<GpHyperparams>& grid,
                              Exec exec) {
  if (grid.empty()) throw DomainError("fit_hyperparams: empty grid");
  if (samples.size() < 3) throw DomainError("fit_hyperparams: need >= 3 samples");

  bool found = false;
  double best_lml = -std::numeric_limits<double>::infinity();
  GpHyperparams best{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double lml;
    try {
      lml = GpForceMap::fit(samples, grid[i], exec).log_marginal_likelihood();
    } catch (const Error&) {
      logging::debug("fit_hyperparams: candidate %zu failed factorization", i);
      continue;
    }
    if (!found || lml > best_lml ||
        (lml == best_lml && grid[i].length_scale < best.length_scale)) {
      found = true;
      best_lml = lml;
      best = grid[i];
    }
  }
  if (!found)
    throw FitError(
        "fit_hyperparams: every grid candidate failed factorization; "
        "increase noise_std");
  return best;
}

}  // namespace leeway
