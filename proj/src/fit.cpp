#include "gslab/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "gslab/errors.hpp"

namespace gslab {

namespace {

void check_points(std::span<const std::pair<double, double>> pts, bool need_below_one) {
  if (pts.size() < 4) throw IllConditionedFit("fit needs at least 4 points");
  double lo = pts.front().first, hi = lo;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw InvalidArgument("fit points must be positive and finite");
    if (need_below_one && !(x < 1.0)) throw InvalidArgument("log-corrected fit needs x < 1");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi / lo < 4.0) throw IllConditionedFit("x spread below a factor of 4");
}

FitResult solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, std::span<const std::pair<double, double>> pts) {
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - A * c;
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  const double ss_res = res.squaredNorm();
  FitResult f;
  f.intercept = c(0);
  f.exponent = c(1);
  f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  f.rms_residual = std::sqrt(ss_res / static_cast<double>(y.size()));
  f.points = pts.size();
  f.x_min = pts.front().first;
  f.x_max = pts.front().first;
  for (const auto& p : pts) {
    f.x_min = std::min(f.x_min, p.first);
    f.x_max = std::max(f.x_max, p.first);
  }
  if (c.size() > 2) f.log_power = c(2);
  return f;
}

}  // namespace

FitResult fit_exponent(std::span<const std::pair<double, double>> pts, bool with_log) {
  check_points(pts, with_log);
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(n, with_log ? 3 : 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [x, v] = pts[static_cast<std::size_t>(i)];
    A(i, 0) = 1.0;
    A(i, 1) = std::log(x);
    if (with_log) A(i, 2) = std::log(std::log(1.0 / x));
    y(i) = std::log(v);
  }
  auto f = solve(A, y, pts);
  f.with_log = with_log;
  return f;
}

FitResult fit_tied_log(std::span<const std::pair<double, double>> pts) {
  check_points(pts, true);
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [x, v] = pts[static_cast<std::size_t>(i)];
    A(i, 0) = 1.0;
    A(i, 1) = std::log(x * std::log(1.0 / x));
    y(i) = std::log(v);
  }
  auto f = solve(A, y, pts);
  f.log_power = f.exponent;
  f.with_log = true;
  return f;
}

}  // namespace gslab
