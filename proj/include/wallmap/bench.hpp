#pragma once

#include <functional>
#include <vector>

namespace wallmap::bench {

/// Median per-call seconds: the body is run `batch` times per sample (one
/// timer read pair per batch) and the median over `samples` batches taken.
double median_seconds(const std::function<void()>& body, int batch, int samples);

/// Preemption-resistant variant: each sample is the minimum over `inner`
/// consecutive batch averages; the median over `samples` such minima is
/// returned. Suited to sub-microsecond bodies on noisy machines.
double robust_median_seconds(const std::function<void()>& body, int batch, int inner,
                             int samples);

double median(std::vector<double> values);
double percentile(std::vector<double> values, double q);  // q in [0, 1]

/// Ordinary least squares y = slope * x + intercept with R^2 and the
/// half-width of the 95% confidence interval on the slope.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_ci95 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wallmap::bench
