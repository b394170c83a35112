#include "dynid/signal.hpp"

#include <sstream>

namespace dynid {

void estimate_derivatives(Dataset& data, int window, int degree) {
  if (window < 3 || window % 2 == 0) {
    throw std::invalid_argument("estimate_derivatives: window must be odd and >= 3, got " +
                                std::to_string(window));
  }
  if (degree < 2 || degree >= window) {
    std::ostringstream msg;
    msg << "estimate_derivatives: need 2 <= degree < window, got degree " << degree
        << " with window " << window;
    throw std::invalid_argument(msg.str());
  }
  const Eigen::Index n = data.rows();
  if (n < window) {
    std::ostringstream msg;
    msg << "estimate_derivatives: dataset has " << n << " samples, window needs " << window;
    throw std::invalid_argument(msg.str());
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(data.t[i] > data.t[i - 1])) {
      throw std::invalid_argument("estimate_derivatives: timestamps not strictly increasing at row " +
                                  std::to_string(i));
    }
  }

  const Eigen::Index joints = data.q.cols();
  data.dq.resize(n, joints);
  data.ddq.resize(n, joints);

  Eigen::MatrixXd vand(window, degree + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index lo = i - window / 2;
    lo = std::max<Eigen::Index>(0, std::min(lo, n - window));
    for (Eigen::Index r = 0; r < window; ++r) {
      const double dt = data.t[lo + r] - data.t[i];
      double power = 1.0;
      for (int c = 0; c <= degree; ++c) {
        vand(r, c) = power;
        power *= dt;
      }
    }
    const Eigen::MatrixXd coef =
        vand.colPivHouseholderQr().solve(data.q.middleRows(lo, window));
    data.dq.row(i) = coef.row(1);
    data.ddq.row(i) = 2.0 * coef.row(2);
  }
}

}  // namespace dynid
