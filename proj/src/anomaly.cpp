#include "dynid/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "dynid/errors.hpp"
#include "dynid/regressors.hpp"

namespace dynid {

namespace {

// continued fraction for the incomplete beta function, modified Lentz
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return h;
    }
  }
  throw numeric_error("incomplete beta continued fraction did not converge");
}

// regularized incomplete beta I_x(a, b)
double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  return reg_inc_beta(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2));
}

double f_pdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  const double log_beta = std::lgamma(0.5 * d1) + std::lgamma(0.5 * d2) -
                          std::lgamma(0.5 * (d1 + d2));
  const double log_pdf = 0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(x) -
                         0.5 * (d1 + d2) * std::log1p(d1 * x / d2) - log_beta;
  return std::exp(log_pdf);
}

}  // namespace

ResidualStats residual_stats(const Eigen::MatrixXd& residuals, int latent_count) {
  if (residuals.rows() < 2) {
    throw std::invalid_argument("residual_stats: need at least 2 residual samples, got " +
                                std::to_string(residuals.rows()));
  }
  if (!residuals.allFinite()) {
    throw std::invalid_argument("residual_stats: non-finite residuals");
  }
  ResidualStats stats;
  stats.calibration_count = residuals.rows();
  stats.latent_count = latent_count;
  stats.variances.resize(residuals.cols());
  const double denom = static_cast<double>(residuals.rows() - 1);
  for (Eigen::Index c = 0; c < residuals.cols(); ++c) {
    const double mean = residuals.col(c).mean();
    const double var = (residuals.col(c).array() - mean).matrix().squaredNorm() / denom;
    if (!(var > 0.0)) {
      throw numeric_error("residual_stats: channel " + std::to_string(c + 1) +
                          " has zero variance");
    }
    stats.variances[c] = var;
  }
  return stats;
}

double t2_score(const Eigen::VectorXd& residual, const ResidualStats& stats) {
  if (residual.size() != stats.variances.size()) {
    std::ostringstream msg;
    msg << "t2_score: residual length " << residual.size() << " does not match stats ("
        << stats.variances.size() << ")";
    throw std::invalid_argument(msg.str());
  }
  return (residual.array().square() / stats.variances.array()).sum();
}

double f_quantile(double d1, double d2, double p) {
  if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2)) {
    throw std::invalid_argument("f_quantile: degrees of freedom must be positive and finite");
  }
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("f_quantile: p must lie strictly inside (0, 1), got " +
                                std::to_string(p));
  }

  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < p) {
    hi *= 2.0;
    if (hi > 1e300) {
      throw numeric_error("f_quantile: failed to bracket the quantile");
    }
  }

  double x = 0.5 * hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double err = f_cdf(x, d1, d2) - p;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    if (std::abs(err) < 1e-13 || hi - lo < 1e-15 * std::max(1.0, hi)) {
      break;
    }
    const double slope = f_pdf(x, d1, d2);
    double next = (slope > 0.0) ? x - err / slope : 0.0;
    if (!(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);
    }
    x = next;
  }
  return x;
}

double t2_threshold(const ResidualStats& stats, double alpha, ThresholdDof dof) {
  const int n = (dof == ThresholdDof::LatentCount) ? stats.latent_count : stats.output_dim();
  const double big_n = static_cast<double>(stats.calibration_count);
  if (n < 1) {
    throw std::invalid_argument("t2_threshold: non-positive degree-of-freedom count");
  }
  if (!(big_n > n)) {
    std::ostringstream msg;
    msg << "t2_threshold: calibration count " << stats.calibration_count
        << " must exceed the degree-of-freedom count " << n;
    throw std::invalid_argument(msg.str());
  }
  return n * (big_n - 1.0) / (big_n - n) * f_quantile(n, big_n - n, alpha);
}

DetectionResult detect_contacts(const ChainModel& model,
                                const Dataset& data,
                                const Eigen::VectorXd& phi,
                                const ResidualStats& stats,
                                double alpha,
                                ThresholdDof dof) {
  if (!data.has_derivatives()) {
    throw std::invalid_argument("detect_contacts: dataset is missing derivative estimates");
  }
  const ParameterLayout layout = parameter_layout(model);
  if (phi.size() != layout.cols) {
    std::ostringstream msg;
    msg << "detect_contacts: parameter vector has " << phi.size() << " entries, expected "
        << layout.cols;
    throw std::invalid_argument(msg.str());
  }
  if (stats.variances.size() != layout.rows) {
    std::ostringstream msg;
    msg << "detect_contacts: stats cover " << stats.variances.size()
        << " channels, sample blocks have " << layout.rows;
    throw std::invalid_argument(msg.str());
  }

  DetectionResult out;
  out.threshold = t2_threshold(stats, alpha, dof);
  out.t2.resize(data.rows());
  out.flags.resize(data.rows());
  for (Eigen::Index s = 0; s < data.rows(); ++s) {
    const SampleBlock block = assemble_sample(model, layout, data.q.row(s), data.dq.row(s),
                                              data.ddq.row(s), data.pwm.row(s),
                                              data.wrench.row(s));
    const Eigen::VectorXd residual = block.rhs - block.A * phi;
    out.t2[s] = t2_score(residual, stats);
    out.flags[s] = out.t2[s] > out.threshold ? 1 : 0;
  }
  return out;
}

std::vector<RocPoint> roc_curve(const Eigen::VectorXd& scores,
                                const std::vector<std::uint8_t>& labels) {
  const auto n = scores.size();
  if (n == 0 || labels.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("roc_curve: scores and labels must be non-empty and aligned");
  }
  const long positives = std::count_if(labels.begin(), labels.end(),
                                       [](std::uint8_t v) { return v != 0; });
  const long negatives = static_cast<long>(labels.size()) - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_curve: labels contain a single class");
  }

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> curve;
  curve.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  long tp = 0;
  long fp = 0;
  Eigen::Index i = 0;
  while (i < n) {
    const double value = scores[order[i]];
    curve.push_back({value, static_cast<double>(fp) / negatives,
                     static_cast<double>(tp) / positives});
    while (i < n && scores[order[i]] == value) {
      if (labels[static_cast<std::size_t>(order[i])] != 0) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
  }
  curve.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
  return curve;
}

double roc_area(const std::vector<RocPoint>& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += 0.5 * (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr);
  }
  return area;
}

}  // namespace dynid
