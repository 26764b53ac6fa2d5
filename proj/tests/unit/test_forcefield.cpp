#include <doctest.h>

#include <cmath>
#include <random>

#include "leeway/error.hpp"
#include "leeway/forcefield.hpp"
#include "reference_gp.hpp"

using namespace leeway;

namespace {

std::vector<ForceSample> constant_field_samples(Vec2 value, int n,
                                                std::uint64_t seed,
                                                double noise = 0.0,
                                                double extent = 100.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-extent, extent);
  std::normal_distribution<double> eps(0.0, noise > 0 ? noise : 1e-12);
  std::vector<ForceSample> samples;
  for (int i = 0; i < n; ++i) {
    ForceSample s;
    s.position = {pos(rng), pos(rng)};
    s.vector = value + (noise > 0 ? Vec2{eps(rng), eps(rng)} : Vec2{0, 0});
    s.source = SourceKind::current;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace

TEST_CASE("matern32 closed form") {
  GpHyperparams h{2.0, 10.0, 0.1};
  CHECK(matern32(0.0, h) == doctest::Approx(4.0));

  h.signal_std = 1.0;
  // r = l: (1 + sqrt(3)) * exp(-sqrt(3)) = 0.48335772...
  CHECK(matern32(10.0, h) == doctest::Approx(0.4833577245965077).epsilon(1e-12));
  CHECK(matern32(100.0, h) < 1e-6);  // r = 10 l decay
  CHECK_THROWS_AS(matern32(-1.0, h), DomainError);
}

TEST_CASE("matern32 strictly decreasing") {
  const GpHyperparams h{1.5, 25.0, 0.1};
  double prev = matern32(0.0, h);
  for (double r = 0.5; r < 200.0; r += 0.5) {
    const double k = matern32(r, h);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS((GpHyperparams{0.0, 10.0, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((GpHyperparams{1.0, 0.5, 0.1}.validate()), DomainError);
  CHECK_THROWS_AS((GpHyperparams{1.0, 10.0, -1.0}.validate()), DomainError);
  CHECK_NOTHROW((GpHyperparams{1.0, 10.0, 0.1}.validate()));
}

TEST_CASE("single-sample map interpolates its training point") {
  std::vector<ForceSample> samples{{{0.0, 0.0}, {1.0, 0.0}, SourceKind::wind, 0.0}};
  const GpForceMap map = GpForceMap::fit(samples, {1.0, 10.0, 1e-6});
  const auto p = map.predict({0.0, 0.0});
  CHECK(p.mean.x == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(p.mean.y) < 1e-4);
}

TEST_CASE("constant field is recovered inside the hull") {
  const auto samples = constant_field_samples({0.5, -0.5}, 60, 21, 0.01);
  const GpForceMap map = GpForceMap::fit(samples, default_hyperparams(samples));
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> pos(-60.0, 60.0);
  for (int i = 0; i < 50; ++i) {
    const auto p = map.predict({pos(rng), pos(rng)});
    CHECK(p.mean.x == doctest::Approx(0.5).epsilon(0.1));
    CHECK(p.mean.y == doctest::Approx(-0.5).epsilon(0.1));
  }
}

TEST_CASE("prior reversion far from data") {
  const GpHyperparams h{0.8, 20.0, 0.05};
  const auto samples = constant_field_samples({1.0, 0.3}, 20, 5, 0.0, 50.0);
  const GpForceMap map = GpForceMap::fit(samples, h);
  const auto p = map.predict({20.0 * 100.0 + 3000.0, 0.0});  // r >> 100 l
  CHECK(std::abs(p.mean.x) < 1e-6);
  CHECK(std::abs(p.mean.y) < 1e-6);
  CHECK(p.variance.x == doctest::Approx(0.64).epsilon(1e-6));
}

TEST_CASE("midpoint symmetry between equal-valued points") {
  std::vector<ForceSample> samples{
      {{-10.0, 0.0}, {2.0, 1.0}, SourceKind::wind, 0.0},
      {{10.0, 0.0}, {2.0, 1.0}, SourceKind::wind, 0.0}};
  // length scale >> separation: the posterior mean at the midpoint sits at
  // the common value (exact interpolation overshoots ~5% at l ~ separation)
  const GpForceMap map = GpForceMap::fit(samples, {1.0, 300.0, 1e-4});
  const auto p = map.predict({0.0, 0.0});
  CHECK(p.mean.x == doctest::Approx(2.0).epsilon(5e-3));
  CHECK(p.mean.y == doctest::Approx(1.0).epsilon(5e-3));

  // the reflection symmetry itself is exact at any length scale
  std::vector<ForceSample> flipped{samples[1], samples[0]};
  const GpForceMap map_a = GpForceMap::fit(samples, {1.0, 30.0, 1e-4});
  const GpForceMap map_b = GpForceMap::fit(flipped, {1.0, 30.0, 1e-4});
  CHECK(map_a.predict({0.0, 0.0}).mean.x ==
        doctest::Approx(map_b.predict({0.0, 0.0}).mean.x).epsilon(1e-12));
}

TEST_CASE("fit_gp rejects mixed sources and empty sets") {
  std::vector<ForceSample> mixed{
      {{0, 0}, {1, 0}, SourceKind::wind, 0.0},
      {{1, 0}, {1, 0}, SourceKind::current, 0.0}};
  CHECK_THROWS_AS(GpForceMap::fit(mixed, {1.0, 10.0, 0.1}), DomainError);
  CHECK_THROWS_AS(GpForceMap::fit({}, {1.0, 10.0, 0.1}), DomainError);
}

TEST_CASE("kernel matrix factorization succeeds on random point sets") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> pos(-200.0, 200.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ForceSample> samples;
    const int n = 2 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i)
      samples.push_back({{pos(rng), pos(rng)}, {0.1, 0.2}, SourceKind::wind, 0.0});
    CHECK_NOTHROW(GpForceMap::fit(samples, {1.0, 50.0, 0.05}));
  }
}

TEST_CASE("posterior mean is linear in the targets (superposition)") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<ForceSample> s1, s2, s12;
  for (int i = 0; i < 25; ++i) {
    const LocalPoint p{pos(rng), pos(rng)};
    const Vec2 v1{val(rng), val(rng)}, v2{val(rng), val(rng)};
    s1.push_back({p, v1, SourceKind::wind, 0.0});
    s2.push_back({p, v2, SourceKind::wind, 0.0});
    s12.push_back({p, v1 + v2, SourceKind::wind, 0.0});
  }
  const GpHyperparams h{1.0, 30.0, 0.1};
  const GpForceMap m1 = GpForceMap::fit(s1, h);
  const GpForceMap m2 = GpForceMap::fit(s2, h);
  const GpForceMap m12 = GpForceMap::fit(s12, h);
  for (int i = 0; i < 30; ++i) {
    const LocalPoint q{pos(rng), pos(rng)};
    const Vec2 sum = m1.predict(q).mean + m2.predict(q).mean;
    const Vec2 joint = m12.predict(q).mean;
    CHECK(std::abs(sum.x - joint.x) < 1e-9);
    CHECK(std::abs(sum.y - joint.y) < 1e-9);
  }
}

TEST_CASE("posterior variance at distinct training points stays below noise") {
  const auto samples = constant_field_samples({0.4, 0.1}, 40, 77, 0.0, 150.0);
  const GpHyperparams h{1.0, 40.0, 0.05};
  const GpForceMap map = GpForceMap::fit(samples, h);
  for (const auto& s : samples) {
    const auto p = map.predict(s.position);
    CHECK(p.variance.x <= h.noise_std * h.noise_std + 1e-6);
  }
}

TEST_CASE("training targets reproduced within 3 noise sigma") {
  const auto samples = constant_field_samples({0.7, -0.2}, 50, 13, 0.02, 120.0);
  const GpHyperparams h{0.5, 60.0, 0.05};
  const GpForceMap map = GpForceMap::fit(samples, h);
  for (const auto& s : samples) {
    const auto p = map.predict(s.position);
    CHECK(std::abs(p.mean.x - s.vector.x) <= 3.0 * h.noise_std);
    CHECK(std::abs(p.mean.y - s.vector.y) <= 3.0 * h.noise_std);
  }
}

TEST_CASE("production posterior matches the reference implementation") {
  const auto samples = constant_field_samples({0.3, 0.9}, 30, 55, 0.05, 80.0);
  const GpHyperparams h{0.7, 35.0, 0.08};
  const GpForceMap map = GpForceMap::fit(samples, h);
  std::mt19937_64 rng(56);
  std::uniform_real_distribution<double> pos(-100.0, 100.0);
  for (int i = 0; i < 10; ++i) {
    const LocalPoint q{pos(rng), pos(rng)};
    const auto got = map.predict(q);
    const auto want = refgp::predict(samples, h, q);
    CHECK(got.mean.x == doctest::Approx(want.mean_x).epsilon(1e-9));
    CHECK(got.mean.y == doctest::Approx(want.mean_y).epsilon(1e-9));
    CHECK(got.variance.x == doctest::Approx(want.variance).epsilon(1e-7));
  }
  CHECK(map.log_marginal_likelihood() ==
        doctest::Approx(refgp::log_marginal_likelihood(samples, h)).epsilon(1e-9));
}

TEST_CASE("fit_hyperparams selects by log marginal likelihood") {
  SUBCASE("single-element grid") {
    const auto samples = constant_field_samples({0.5, 0.5}, 10, 1, 0.01);
    const GpHyperparams only{1.0, 20.0, 0.1};
    const auto got = fit_hyperparams(samples, {only});
    CHECK(got.length_scale == 20.0);
  }
  SUBCASE("constant field prefers the long length scale") {
    const auto samples = constant_field_samples({0.5, -0.5}, 40, 2, 0.02, 200.0);
    const GpHyperparams short_l{0.5, 10.0, 0.05};
    const GpHyperparams long_l{0.5, 1000.0, 0.05};
    // cross-check the selection criterion against the reference LML
    const double lml_short = refgp::log_marginal_likelihood(samples, short_l);
    const double lml_long = refgp::log_marginal_likelihood(samples, long_l);
    REQUIRE(lml_long > lml_short);
    const auto got = fit_hyperparams(samples, {short_l, long_l});
    CHECK(got.length_scale == 1000.0);
  }
  SUBCASE("identical entries tie-break to the first") {
    const auto samples = constant_field_samples({0.5, 0.0}, 10, 3, 0.01);
    const GpHyperparams a{1.0, 30.0, 0.1};
    const auto got = fit_hyperparams(samples, {a, a});
    CHECK(got.length_scale == 30.0);
  }
}

TEST_CASE("synthetic fields") {
  SUBCASE("uniform") {
    const UniformField f({1.0, 0.0});
    CHECK(f.query({123.0, -45.0}) == Vec2{1.0, 0.0});
  }
  SUBCASE("shear along x") {
    const ShearField f(Axis::x, 0.1);
    const Vec2 v = f.query({0.0, 10.0});
    CHECK(v.x == doctest::Approx(1.0));
    CHECK(v.y == doctest::Approx(0.0));
  }
  SUBCASE("vortex tangential direction and magnitude") {
    const VortexField f({0.0, 0.0}, 2.0);
    const Vec2 v = f.query({1.0, 0.0});
    CHECK(v.x == doctest::Approx(0.0));
    CHECK(v.y == doctest::Approx(2.0));
    // cap inside unit radius, 1/r decay outside
    CHECK(f.query({0.5, 0.0}).norm() == doctest::Approx(2.0));
    CHECK(f.query({4.0, 0.0}).norm() == doctest::Approx(0.5));
  }
}

TEST_CASE("serial and parallel kernel paths agree exactly") {
  const auto samples = constant_field_samples({0.2, 0.8}, 80, 8, 0.03, 300.0);
  std::vector<LocalPoint> points;
  for (const auto& s : samples) points.push_back(s.position);
  const GpHyperparams h{0.9, 55.0, 0.07};

  Eigen::MatrixXd serial, parallel;
  gp_detail::build_kernel_matrix(points, h, serial, Exec::serial);
  gp_detail::build_kernel_matrix(points, h, parallel, Exec::parallel);
  CHECK((serial - parallel).cwiseAbs().maxCoeff() == 0.0);

  const GpForceMap map = GpForceMap::fit(samples, h);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pos(-300.0, 300.0);
  std::vector<LocalPoint> query;
  for (int i = 0; i < 500; ++i) query.push_back({pos(rng), pos(rng)});
  const auto a = map.predict_batch(query, Exec::serial);
  const auto b = map.predict_batch(query, Exec::parallel);
  for (std::size_t i = 0; i < query.size(); ++i) {
    CHECK(a[i].mean.x == b[i].mean.x);
    CHECK(a[i].mean.y == b[i].mean.y);
    CHECK(a[i].variance.x == b[i].variance.x);
  }
}

TEST_CASE("default hyperparameters follow the documented rule") {
  const auto samples = constant_field_samples({0.5, -0.5}, 100, 44, 0.0, 100.0);
  const GpHyperparams h = default_hyperparams(samples);
  // pooled values {0.5, -0.5} have mean 0 and std ~0.5
  CHECK(h.signal_std == doctest::Approx(0.5).epsilon(0.02));
  CHECK(h.noise_std == doctest::Approx(0.1 * h.signal_std));
  Vec2 lo = samples.front().position, hi = lo;
  for (const auto& s : samples) {
    lo.x = std::min(lo.x, s.position.x);
    lo.y = std::min(lo.y, s.position.y);
    hi.x = std::max(hi.x, s.position.x);
    hi.y = std::max(hi.y, s.position.y);
  }
  CHECK(h.length_scale == doctest::Approx((hi - lo).norm() / 4.0));
}
