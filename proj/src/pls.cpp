#include "dynid/pls.hpp"

#include <cmath>
#include <sstream>

#include "dynid/errors.hpp"

namespace dynid {

namespace {

struct Preprocessed {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd means;
  Eigen::VectorXd scales;
  double b_mean = 0.0;
};

Preprocessed preprocess(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                        const PlsOptions& options) {
  Preprocessed out;
  out.A = A;
  out.b = b;
  out.means = Eigen::VectorXd::Zero(A.cols());
  out.scales = Eigen::VectorXd::Ones(A.cols());
  if (options.center) {
    out.means = A.colwise().mean();
    out.A.rowwise() -= out.means.transpose();
    out.b_mean = b.mean();
    out.b.array() -= out.b_mean;
  }
  if (options.scale) {
    const double denom = static_cast<double>(A.rows() - 1);
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
      const double sd = std::sqrt(out.A.col(c).squaredNorm() / denom);
      if (sd > 1e-300) {
        out.scales[c] = sd;
        out.A.col(c) /= sd;
      }
    }
  }
  return out;
}

void require_regression_inputs(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != b.size()) {
    std::ostringstream msg;
    msg << "pls: A has " << A.rows() << " rows but b has " << b.size() << " entries";
    throw std::invalid_argument(msg.str());
  }
  if (A.rows() < 2) {
    throw std::invalid_argument("pls: need at least 2 rows");
  }
  if (!A.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("pls: non-finite inputs");
  }
}

}  // namespace

PlsModel nipals_fit(const Eigen::MatrixXd& A,
                    const Eigen::VectorXd& b,
                    int latent_count,
                    const PlsOptions& options) {
  require_regression_inputs(A, b);
  const int max_components = static_cast<int>(std::min(A.rows(), A.cols()));
  if (latent_count < 1 || latent_count > max_components) {
    std::ostringstream msg;
    msg << "pls: latent count " << latent_count << " outside [1, " << max_components << "]";
    throw std::invalid_argument(msg.str());
  }
  const double b_spread = (b.array() - b.mean()).matrix().norm();
  if (b_spread < 1e-15 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    throw numeric_error("pls: b has zero variance");
  }

  Preprocessed work = preprocess(A, b, options);
  const double a_norm = work.A.norm();

  PlsModel model;
  model.column_means = work.means;
  model.column_scales = work.scales;
  model.output_mean = work.b_mean;
  model.weights.resize(A.cols(), latent_count);
  model.loadings.resize(A.cols(), latent_count);
  model.output_loadings.resize(latent_count);
  model.scores.resize(A.rows(), latent_count);

  int extracted = 0;
  for (int k = 0; k < latent_count; ++k) {
    Eigen::VectorXd u = work.b;
    Eigen::VectorXd weight(A.cols());
    Eigen::VectorXd score = Eigen::VectorXd::Zero(A.rows());
    double c = 0.0;
    bool degenerate = false;
    bool converged = false;
    for (int iter = 0; iter < options.max_inner_iterations; ++iter) {
      weight = work.A.transpose() * u;
      const double wn = weight.norm();
      if (wn < options.degenerate_score * std::max(1.0, a_norm)) {
        degenerate = true;
        break;
      }
      weight /= wn;
      const Eigen::VectorXd next = work.A * weight;
      const double tt = next.squaredNorm();
      if (tt < options.degenerate_score * options.degenerate_score * a_norm * a_norm) {
        degenerate = true;
        score = next;
        break;
      }
      c = work.b.dot(next) / tt;
      u = work.b / (c != 0.0 ? c : 1.0);
      const double change = (next - score).norm();
      score = next;
      if (change <= options.inner_tolerance * score.norm()) {
        converged = true;
        break;
      }
    }
    if (degenerate || score.norm() < options.degenerate_score * a_norm) {
      std::ostringstream msg;
      msg << "component " << k + 1 << " degenerate (score norm below "
          << options.degenerate_score << " * ||A||), stopping at " << extracted
          << " components";
      model.warnings.push_back(msg.str());
      break;
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "pls: component " << k + 1 << " did not converge in "
          << options.max_inner_iterations << " inner iterations";
      throw numeric_error(msg.str());
    }

    const double tt = score.squaredNorm();
    const Eigen::VectorXd loading = work.A.transpose() * score / tt;
    work.A.noalias() -= score * loading.transpose();
    work.b.noalias() -= c * score;

    model.weights.col(extracted) = weight;
    model.loadings.col(extracted) = loading;
    model.output_loadings[extracted] = c;
    model.scores.col(extracted) = score;
    ++extracted;
  }
  if (extracted == 0) {
    throw numeric_error("pls: no informative component could be extracted");
  }
  model.latent_count = extracted;
  model.weights.conservativeResize(Eigen::NoChange, extracted);
  model.loadings.conservativeResize(Eigen::NoChange, extracted);
  model.output_loadings.conservativeResize(extracted);
  model.scores.conservativeResize(Eigen::NoChange, extracted);

  const Eigen::MatrixXd pw = model.loadings.transpose() * model.weights;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(pw, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= 1e-12 * sv[0]) {
    throw numeric_error("pls: P^T W is numerically singular");
  }
  const Eigen::VectorXd beta = model.weights * svd.solve(model.output_loadings);

  model.coefficients = beta.cwiseQuotient(model.column_scales);
  model.intercept = model.output_mean - model.column_means.dot(model.coefficients);
  return model;
}

Eigen::VectorXd estimate_parameters(const PlsModel& model) { return model.coefficients; }

Eigen::VectorXd predict(const PlsModel& model, const Eigen::MatrixXd& A_new) {
  if (A_new.cols() != model.coefficients.size()) {
    std::ostringstream msg;
    msg << "pls predict: input has " << A_new.cols() << " columns, model expects "
        << model.coefficients.size();
    throw std::invalid_argument(msg.str());
  }
  return (A_new * model.coefficients).array() + model.intercept;
}

int select_latent_count(const Eigen::MatrixXd& A,
                        const Eigen::VectorXd& b,
                        LatentPolicy policy,
                        double rank_tol,
                        int folds,
                        const PlsOptions& options) {
  require_regression_inputs(A, b);

  Preprocessed work = preprocess(A, b, options);
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(work.A);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) {
      ++rank;
    }
  }
  if (rank == 0) {
    throw numeric_error("select_latent_count: matrix has numerical rank zero");
  }
  if (policy == LatentPolicy::Rank) {
    return rank;
  }

  if (folds < 2 || A.rows() < folds) {
    std::ostringstream msg;
    msg << "select_latent_count: need 2 <= folds <= rows, got " << folds << " folds for "
        << A.rows() << " rows";
    throw std::invalid_argument(msg.str());
  }

  const Eigen::Index n = A.rows();
  std::vector<PlsModel> fold_fits;
  fold_fits.reserve(folds);
  int max_nu = rank;
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index lo = n * f / folds;
    const Eigen::Index hi = n * (f + 1) / folds;
    const Eigen::Index held = hi - lo;
    Eigen::MatrixXd train_A(n - held, A.cols());
    Eigen::VectorXd train_b(n - held);
    train_A.topRows(lo) = A.topRows(lo);
    train_A.bottomRows(n - hi) = A.bottomRows(n - hi);
    train_b.head(lo) = b.head(lo);
    train_b.tail(n - hi) = b.tail(n - hi);
    fold_fits.push_back(nipals_fit(train_A, train_b, rank, options));
    max_nu = std::min(max_nu, fold_fits.back().latent_count);
  }

  Eigen::VectorXd sse = Eigen::VectorXd::Zero(max_nu);
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index lo = n * f / folds;
    const Eigen::Index hi = n * (f + 1) / folds;
    const PlsModel& fit = fold_fits[f];
    for (int nu = 1; nu <= max_nu; ++nu) {
      const Eigen::MatrixXd pw =
          fit.loadings.leftCols(nu).transpose() * fit.weights.leftCols(nu);
      const Eigen::VectorXd beta =
          fit.weights.leftCols(nu) *
          pw.colPivHouseholderQr().solve(fit.output_loadings.head(nu).eval());
      const Eigen::VectorXd coef = beta.cwiseQuotient(fit.column_scales);
      const double intercept = fit.output_mean - fit.column_means.dot(coef);
      const Eigen::VectorXd pred =
          (A.middleRows(lo, hi - lo) * coef).array() + intercept;
      sse[nu - 1] += (pred - b.segment(lo, hi - lo)).squaredNorm();
    }
  }

  Eigen::Index best = 0;
  sse.minCoeff(&best);
  return static_cast<int>(best) + 1;
}

}  // namespace dynid
