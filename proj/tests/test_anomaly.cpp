#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynid/anomaly.hpp"
#include "dynid/errors.hpp"

using namespace dynid;

namespace {

// Independent density of the F distribution, via lgamma only.
double f_pdf_oracle(double x, double d1, double d2) {
  if (x <= 0.0) {
    return 0.0;
  }
  const double log_beta = std::lgamma(d1 / 2.0) + std::lgamma(d2 / 2.0) -
                          std::lgamma((d1 + d2) / 2.0);
  const double log_pdf = 0.5 * d1 * std::log(d1 / d2) +
                         (0.5 * d1 - 1.0) * std::log(x) -
                         0.5 * (d1 + d2) * std::log(1.0 + d1 * x / d2) - log_beta;
  return std::exp(log_pdf);
}

// Simpson quadrature of the density from 0 to x; the oracle CDF.
double f_cdf_oracle(double x, double d1, double d2) {
  const int slices = 20000;
  const double h = x / slices;
  double sum = f_pdf_oracle(1e-300, d1, d2) + f_pdf_oracle(x, d1, d2);
  for (int i = 1; i < slices; ++i) {
    sum += f_pdf_oracle(i * h, d1, d2) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

ResidualStats unit_stats(int channels, int latent, int calibration) {
  Eigen::MatrixXd residuals(calibration, channels);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < calibration; ++i) {
    for (int c = 0; c < channels; ++c) {
      residuals(i, c) = gauss(rng);
    }
  }
  return residual_stats(residuals, latent);
}

}  // namespace

TEST_CASE("symmetric degrees of freedom put the median at one") {
  for (double d : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    CHECK(std::abs(f_quantile(d, d, 0.5) - 1.0) < 1e-8);
  }
}

TEST_CASE("two-by-two ninety percent point is nine") {
  CHECK(std::abs(f_quantile(2.0, 2.0, 0.9) - 9.0) < 1e-6);
}

TEST_CASE("large second dof approaches the chi-square point") {
  CHECK(std::abs(f_quantile(1.0, 1e6, 0.99) - 6.635) < 1e-2);
}

TEST_CASE("quantile inverts the quadrature oracle") {
  // probes keep d1 >= 2 so the density stays finite at the lower limit of
  // the quadrature
  for (const auto& [d1, d2, p] : std::vector<std::tuple<double, double, double>>{
           {3.0, 7.0, 0.95}, {2.0, 10.0, 0.99}, {8.0, 4.0, 0.75}, {2.0, 2.0, 0.6}}) {
    const double x = f_quantile(d1, d2, p);
    CHECK(std::abs(f_cdf_oracle(x, d1, d2) - p) < 1e-6);
  }
}

TEST_CASE("quantile input guards") {
  CHECK_THROWS_AS(f_quantile(0.0, 2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(f_quantile(2.0, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(f_quantile(2.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("residual variances use the unbiased column estimate") {
  Eigen::MatrixXd residuals(2, 2);
  residuals << 1.0, 2.0,
              -1.0, -2.0;
  const ResidualStats stats = residual_stats(residuals, 1);
  CHECK(stats.variances(0) == doctest::Approx(2.0));
  CHECK(stats.variances(1) == doctest::Approx(8.0));
  CHECK(stats.calibration_count == 2);
}

TEST_CASE("zero-variance channel is reported by index") {
  Eigen::MatrixXd residuals(2, 2);
  residuals << 1.0, 0.0,
              -1.0, 0.0;
  try {
    residual_stats(residuals, 1);
    FAIL("expected numeric_error");
  } catch (const numeric_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("zero variance") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
}

TEST_CASE("threshold closed form at tiny calibration size") {
  // nu = 2, N = 3: 2 * 2 / 1 * F(2, 1; 0.5), and F(2, 1; 0.5) = 3/2.
  Eigen::MatrixXd residuals(3, 2);
  residuals << 1.0, 0.5,
               0.0, -0.5,
              -1.0, 0.25;
  const ResidualStats stats = residual_stats(residuals, 2);
  CHECK(t2_threshold(stats, 0.5, ThresholdDof::LatentCount) ==
        doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("score is the variance-normalized squared residual") {
  Eigen::MatrixXd residuals(2, 2);
  residuals << 1.0, 2.0,
              -1.0, -2.0;
  const ResidualStats stats = residual_stats(residuals, 2);
  Eigen::VectorXd e(2);
  e << 2.0, 4.0;
  CHECK(t2_score(e, stats) == doctest::Approx(4.0 / 2.0 + 16.0 / 8.0));
}

TEST_CASE("consistent rescaling leaves the score unchanged") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd residuals(50, 4);
  for (int i = 0; i < 50; ++i) {
    for (int c = 0; c < 4; ++c) {
      residuals(i, c) = gauss(rng);
    }
  }
  Eigen::Vector4d scale(2.0, 0.5, 10.0, 1e-3);
  Eigen::MatrixXd scaled = residuals * scale.asDiagonal();

  const ResidualStats stats = residual_stats(residuals, 3);
  const ResidualStats stats_scaled = residual_stats(scaled, 3);
  for (int i = 0; i < 10; ++i) {
    const Eigen::VectorXd e = residuals.row(i).transpose();
    const Eigen::VectorXd es = scaled.row(i).transpose();
    CHECK(t2_score(e, stats) == doctest::Approx(t2_score(es, stats_scaled)).epsilon(1e-12));
  }
}

TEST_CASE("calibration variance concentrates at scale") {
  std::mt19937_64 rng(314);
  const double sigma = 0.7;
  std::normal_distribution<double> gauss(0.0, sigma);
  const int n = 100000;
  Eigen::MatrixXd residuals(n, 1);
  for (int i = 0; i < n; ++i) {
    residuals(i, 0) = gauss(rng);
  }
  const ResidualStats stats = residual_stats(residuals, 1);
  CHECK(stats.variances(0) > 0.98 * sigma * sigma);
  CHECK(stats.variances(0) < 1.02 * sigma * sigma);
}

TEST_CASE("null exceedance sits near the design rate") {
  std::mt19937_64 rng(999);
  std::normal_distribution<double> gauss(0.0, 1.3);
  const int channels = 3;
  const int n_cal = 20000;
  Eigen::MatrixXd calibration(n_cal, channels);
  for (int i = 0; i < n_cal; ++i) {
    for (int c = 0; c < channels; ++c) {
      calibration(i, c) = gauss(rng);
    }
  }
  const ResidualStats stats = residual_stats(calibration, channels);
  const double limit = t2_threshold(stats, 0.99, ThresholdDof::OutputDim);

  const int n_test = 10000;
  int exceed = 0;
  for (int i = 0; i < n_test; ++i) {
    Eigen::VectorXd e(channels);
    for (int c = 0; c < channels; ++c) {
      e(c) = gauss(rng);
    }
    if (t2_score(e, stats) > limit) {
      ++exceed;
    }
  }
  const double rate = static_cast<double>(exceed) / n_test;
  CHECK(rate > 0.005);
  CHECK(rate < 0.015);
}

TEST_CASE("threshold dof switch uses the output dimension") {
  const ResidualStats stats = unit_stats(6, 2, 1000);
  const double by_latent = t2_threshold(stats, 0.99, ThresholdDof::LatentCount);
  const double by_output = t2_threshold(stats, 0.99, ThresholdDof::OutputDim);
  CHECK(by_output > by_latent);
}

TEST_CASE("threshold needs more calibration samples than dof") {
  const ResidualStats stats = unit_stats(4, 3, 4);
  CHECK_THROWS_AS(t2_threshold(stats, 0.99, ThresholdDof::OutputDim),
                  std::invalid_argument);
}

TEST_CASE("roc on a perfectly separating score") {
  Eigen::VectorXd scores(2);
  scores << 1.0, 2.0;
  const std::vector<std::uint8_t> labels = {0, 1};
  const auto curve = roc_curve(scores, labels);
  REQUIRE(curve.size() == 4);
  // Sweeping the threshold passes through (0,0), (0,1), (1,1).
  CHECK(curve[0].fpr == 0.0);
  CHECK(curve[0].tpr == 0.0);
  CHECK(curve[1].fpr == 0.0);
  CHECK(curve[1].tpr == 0.0);
  CHECK(curve[1].threshold == 2.0);
  CHECK(curve[2].fpr == 0.0);
  CHECK(curve[2].tpr == 1.0);
  CHECK(curve[3].fpr == 1.0);
  CHECK(curve[3].tpr == 1.0);
  CHECK(roc_area(curve) == doctest::Approx(1.0));
}

TEST_CASE("roc points are monotone and the area is chance for noise") {
  std::mt19937_64 rng(2025);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.4);
  const int n = 10000;
  Eigen::VectorXd scores(n);
  std::vector<std::uint8_t> labels(n);
  for (int i = 0; i < n; ++i) {
    scores(i) = gauss(rng);
    labels[i] = coin(rng) ? 1 : 0;
  }
  const auto curve = roc_curve(scores, labels);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].fpr >= curve[i - 1].fpr);
    CHECK(curve[i].tpr >= curve[i - 1].tpr);
    CHECK(curve[i].threshold <= curve[i - 1].threshold);
  }
  const double area = roc_area(curve);
  CHECK(area > 0.45);
  CHECK(area < 0.55);
}

TEST_CASE("roc rejects single-class labels") {
  Eigen::VectorXd scores(3);
  scores << 1.0, 2.0, 3.0;
  CHECK_THROWS_AS(roc_curve(scores, {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(roc_curve(scores, {0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(roc_curve(scores, {0, 1}), std::invalid_argument);
}
