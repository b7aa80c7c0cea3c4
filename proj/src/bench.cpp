#include "wallmap/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wallmap::bench {

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median: empty input");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) {
    throw std::invalid_argument("percentile: empty input");
  }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

double median_seconds(const std::function<void()>& body, int batch, int samples) {
  if (batch < 1 || samples < 1) {
    throw std::invalid_argument("median_seconds: batch and samples must be >= 1");
  }
  using Clock = std::chrono::steady_clock;
  std::vector<double> per_call(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const auto t0 = Clock::now();
    for (int b = 0; b < batch; ++b) {
      body();
    }
    const auto t1 = Clock::now();
    per_call[static_cast<std::size_t>(s)] =
        std::chrono::duration<double>(t1 - t0).count() / static_cast<double>(batch);
  }
  return median(std::move(per_call));
}

double robust_median_seconds(const std::function<void()>& body, int batch, int inner,
                             int samples) {
  if (inner < 1) {
    throw std::invalid_argument("robust_median_seconds: inner must be >= 1");
  }
  std::vector<double> minima(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inner; ++k) {
      best = std::min(best, median_seconds(body, batch, 1));
    }
    minima[static_cast<std::size_t>(s)] = best;
  }
  return median(std::move(minima));
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) {
    throw std::invalid_argument("linear_fit: need >= 3 paired samples");
  }
  const double nd = static_cast<double>(n);
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= nd;
  mean_y /= nd;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) {
    throw std::invalid_argument("linear_fit: x values are all equal");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;

  if (n > 2) {
    const double sigma2 = ss_res / (nd - 2.0);
    const double se = std::sqrt(sigma2 / sxx);
    // Two-sided 95% t quantile; 1.96 is within 2% for dof >= 30.
    const double dof = nd - 2.0;
    const double t95 = dof >= 30.0 ? 1.96 : (dof >= 10.0 ? 2.23 : 2.78);
    fit.slope_ci95 = t95 * se;
  }
  return fit;
}

}  // namespace wallmap::bench
