#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "leeway/geo.hpp"
#include "leeway/sensors.hpp"

namespace leeway {

/// Execution policy for the data-parallel kernels (kernel-matrix assembly
/// and batch prediction). `serial` is the reference path kept for testing;
/// `parallel` runs the same per-element arithmetic under OpenMP and must
/// produce bit-identical results.
enum class Exec { serial, parallel };

/// One converted environmental measurement in the world frame.
struct ForceSample {
  LocalPoint position;
  Vec2 vector;  // m/s, east/north components
  SourceKind source = SourceKind::wind;
  double time = 0.0;
};

struct GpHyperparams {
  double signal_std = 1.0;    // m/s
  double length_scale = 50.0; // m, in [1, 1e5]
  double noise_std = 0.1;     // m/s

  void validate() const;  // throws DomainError
};

/// Matern 3/2 covariance: k(r) = s^2 * (1 + sqrt(3) r / l) * exp(-sqrt(3) r / l).
double matern32(double r, const GpHyperparams& h);

struct GpPrediction {
  Vec2 mean;      // m/s
  Vec2 variance;  // (m/s)^2, per component, >= 0
};

/// Exact GP regression over scattered force measurements: one scalar GP per
/// east/north component sharing the kernel matrix. Dense Cholesky
/// factorization, capped at 2000 training points. Immutable once fitted.
class GpForceMap {
 public:
  static constexpr int kMaxTrainingPoints = 2000;

  /// Fits both component GPs. Throws FitError on factorization failure
  /// (advising a larger noise_std) or when the cap is exceeded.
  static GpForceMap fit(const std::vector<ForceSample>& samples,
                        const GpHyperparams& h, Exec exec = Exec::parallel);

  GpPrediction predict(const LocalPoint& p) const;

  /// Batch posterior evaluation; the parallel path is the production one,
  /// the serial path the testing reference.
  std::vector<GpPrediction> predict_batch(std::span<const LocalPoint> query,
                                          Exec exec = Exec::parallel) const;

  /// Sum of the per-component log marginal likelihoods.
  double log_marginal_likelihood() const { return lml_; }

  const GpHyperparams& hyper() const { return hyper_; }
  SourceKind source() const { return source_; }
  const std::vector<LocalPoint>& training_points() const { return points_; }
  Vec2 training_target(std::size_t i) const {
    return {targets_(static_cast<Eigen::Index>(i), 0),
            targets_(static_cast<Eigen::Index>(i), 1)};
  }
  std::size_t size() const { return points_.size(); }

 private:
  GpForceMap() = default;

  GpHyperparams hyper_;
  SourceKind source_ = SourceKind::wind;
  std::vector<LocalPoint> points_;
  Eigen::MatrixXd targets_;  // n x 2, columns = (vx, vy)
  Eigen::MatrixXd chol_l_;   // lower Cholesky factor of K + noise^2 I
  Eigen::MatrixXd alpha_;    // n x 2 dual weights
  double lml_ = 0.0;
};

/// Default hyperparameters when the user provides none:
/// signal_std = sample standard deviation of the target components,
/// length_scale = 1/4 of the training bounding-box diagonal (floored at 1 m),
/// noise_std = 0.1 * signal_std.
GpHyperparams default_hyperparams(const std::vector<ForceSample>& samples);

/// Grid search maximizing the summed (vx, vy) log marginal likelihood.
/// Ties break toward the smallest length_scale, then the smallest index.
/// Candidates whose factorization fails are skipped; all failing -> FitError.
GpHyperparams fit_hyperparams(const std::vector<ForceSample>& samples,
                              const std::vector<GpHyperparams>& grid,
                              Exec exec = Exec::parallel);

/// Queryable 2-D vector field. Implementations must be deterministic for a
/// fixed field value; all are safe to query concurrently.
class ForceField {
 public:
  virtual ~ForceField() = default;
  virtual Vec2 query(const LocalPoint& p) const = 0;
};

class ZeroField final : public ForceField {
 public:
  Vec2 query(const LocalPoint&) const override { return {0.0, 0.0}; }
};

class UniformField final : public ForceField {
 public:
  explicit UniformField(Vec2 v) : v_(v) {}
  Vec2 query(const LocalPoint&) const override { return v_; }

 private:
  Vec2 v_;
};

enum class Axis { x, y };

/// Field directed along `axis`, magnitude linear in the cross-axis
/// coordinate (rate * coordinate), plus a constant base.
class ShearField final : public ForceField {
 public:
  ShearField(Axis axis, double rate, Vec2 base = {0.0, 0.0})
      : axis_(axis), rate_(rate), base_(base) {}
  Vec2 query(const LocalPoint& p) const override {
    if (axis_ == Axis::x) return base_ + Vec2{rate_ * p.y, 0.0};
    return base_ + Vec2{0.0, rate_ * p.x};
  }

 private:
  Axis axis_;
  double rate_;
  Vec2 base_;
};

/// Tangential field of magnitude strength/r, capped at strength for r < 1 m.
class VortexField final : public ForceField {
 public:
  VortexField(LocalPoint center, double strength)
      : center_(center), strength_(strength) {}
  Vec2 query(const LocalPoint& p) const override;

 private:
  LocalPoint center_;
  double strength_;
};

/// Adapts a fitted GP map to the ForceField interface (posterior mean only).
class GpField final : public ForceField {
 public:
  explicit GpField(std::shared_ptr<const GpForceMap> map) : map_(std::move(map)) {}
  Vec2 query(const LocalPoint& p) const override { return map_->predict(p).mean; }
  const GpForceMap& map() const { return *map_; }

 private:
  std::shared_ptr<const GpForceMap> map_;
};

namespace gp_detail {

/// Kernel Gram matrix K(points, points); serial and OpenMP paths share the
/// same per-element arithmetic.
void build_kernel_matrix(std::span<const LocalPoint> points,
                         const GpHyperparams& h, Eigen::MatrixXd& out,
                         Exec exec);

/// Cross-covariance vector k(p, points).
void kernel_vector(const LocalPoint& p, std::span<const LocalPoint> points,
                   const GpHyperparams& h, Eigen::VectorXd& out);

}  // namespace gp_detail

}  // namespace leeway
