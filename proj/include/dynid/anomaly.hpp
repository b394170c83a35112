#ifndef DYNID__ANOMALY_HPP_
#define DYNID__ANOMALY_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "dynid/model.hpp"
#include "dynid/signal.hpp"

namespace dynid {

/**
 * @brief Per-channel variances of the calibration residuals plus the fit
 *        bookkeeping the control limit needs.
 *
 * variances has one entry per row of the per-sample residual block,
 * calibration_count is the number of calibration samples the variances were
 * estimated from, latent_count the fitted component count.
 */
struct ResidualStats {
  Eigen::VectorXd variances;
  long calibration_count = 0;
  int latent_count = 0;

  int output_dim() const { return static_cast<int>(variances.size()); }
};

/**
 * @brief Unbiased per-channel variances of a residual matrix (row per
 *        sample). Throws numeric_error naming the first channel with zero
 *        variance.
 */
ResidualStats residual_stats(const Eigen::MatrixXd& residuals, int latent_count);

/// T^2 = e^T diag(variances)^-1 e for one residual block.
double t2_score(const Eigen::VectorXd& residual, const ResidualStats& stats);

/**
 * @brief Quantile of the F distribution: the x with CDF(x; d1, d2) = p.
 *
 * Evaluated through the regularized incomplete beta function (continued
 * fraction), inverted by bracketed bisection with Newton polishing; the
 * returned value satisfies |CDF(x) - p| < 1e-10.
 */
double f_quantile(double d1, double d2, double p);

/// Degrees of freedom the control limit is computed with.
enum class ThresholdDof {
  LatentCount,  ///< fitted component count
  OutputDim     ///< residual block length
};

/**
 * @brief Control limit n(N-1)/(N-n) * F(n, N-n; alpha) with n picked by
 *        @p dof and N the calibration count. Requires N > n and
 *        0 < alpha < 1.
 */
double t2_threshold(const ResidualStats& stats, double alpha,
                    ThresholdDof dof = ThresholdDof::LatentCount);

/// Per-sample monitoring outcome over one dataset.
struct DetectionResult {
  Eigen::VectorXd t2;
  std::vector<std::uint8_t> flags;  ///< t2 > threshold
  double threshold = 0.0;
};

/**
 * @brief Scores every sample of @p data against the identified parameters:
 *        builds the sample's measurement block, takes the residual
 *        e = rhs - A * phi and flags T^2 above the alpha control limit.
 *
 * The dataset must carry derivative estimates.
 */
DetectionResult detect_contacts(const ChainModel& model,
                                const Dataset& data,
                                const Eigen::VectorXd& phi,
                                const ResidualStats& stats,
                                double alpha,
                                ThresholdDof dof = ThresholdDof::LatentCount);

struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

/**
 * @brief Operating points of the detector "score > threshold" swept over
 *        +inf, every distinct score (descending) and -inf.
 *
 * Labels must contain both classes. Rates are monotone non-decreasing along
 * the returned order.
 */
std::vector<RocPoint> roc_curve(const Eigen::VectorXd& scores,
                                const std::vector<std::uint8_t>& labels);

/// Area under the curve by trapezoidal integration over FPR.
double roc_area(const std::vector<RocPoint>& curve);

}  // namespace dynid

#endif  // DYNID__ANOMALY_HPP_
