#ifndef DYNID__PLS_HPP_
#define DYNID__PLS_HPP_

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace dynid {

struct PlsOptions {
  bool center = true;  ///< subtract column means of A and the mean of b
  bool scale = false;  ///< divide A columns by their standard deviation
  int max_inner_iterations = 500;
  double inner_tolerance = 1e-12;    ///< relative score change per inner pass
  double degenerate_score = 1e-14;  ///< early-stop threshold, relative to ||A||
};

/**
 * @brief Latent-variable regression model of a single output.
 *
 * weights (W), loadings (P) and output_loadings (C) are per extracted
 * component; scores (T) are kept for diagnostics but are reconstructible
 * and never serialized. coefficients/intercept apply to raw, unprocessed
 * inputs: b_hat = A * coefficients + intercept.
 */
struct PlsModel {
  int latent_count = 0;
  Eigen::MatrixXd weights;
  Eigen::MatrixXd loadings;
  Eigen::VectorXd output_loadings;
  Eigen::MatrixXd scores;

  Eigen::VectorXd column_means;
  Eigen::VectorXd column_scales;
  double output_mean = 0.0;

  Eigen::VectorXd coefficients;
  double intercept = 0.0;

  std::vector<std::string> warnings;
};

/**
 * @brief Fits @p latent_count components by NIPALS: iterate weight, score
 *        and output-loading updates until the score stabilizes, then
 *        deflate A and b by the extracted component.
 *
 * A component whose score norm falls below degenerate_score * ||A|| stops
 * extraction early with a warning and a reduced latent_count. Inner
 * iterations that fail to converge within the cap raise numeric_error
 * naming the component, as does b with zero variance.
 */
PlsModel nipals_fit(const Eigen::MatrixXd& A,
                    const Eigen::VectorXd& b,
                    int latent_count,
                    const PlsOptions& options = {});

/// The parameter estimate W (P^T W)^-1 C mapped back to raw inputs.
Eigen::VectorXd estimate_parameters(const PlsModel& model);

/// Applies the model to new rows: A_new * coefficients + intercept.
Eigen::VectorXd predict(const PlsModel& model, const Eigen::MatrixXd& A_new);

enum class LatentPolicy {
  Rank,            ///< singular values of the preprocessed A above rank_tol * max
  CrossValidation  ///< contiguous k-fold held-out prediction error
};

/**
 * @brief Picks the component count for nipals_fit.
 *
 * Rank counts the singular values of the preprocessed A above
 * rank_tol * sigma_max. CrossValidation fits each training split once and
 * scores every candidate count on the held-out block, returning the
 * smallest count within the minimum error.
 */
int select_latent_count(const Eigen::MatrixXd& A,
                        const Eigen::VectorXd& b,
                        LatentPolicy policy,
                        double rank_tol = 1e-8,
                        int folds = 5,
                        const PlsOptions& options = {});

}  // namespace dynid

#endif  // DYNID__PLS_HPP_
