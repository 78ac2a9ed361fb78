// Decay-rate evidence from norm time series: log-log slope fits,
// sup-certificates for f(t) <= C t^-p (optionally with a log factor),
// and tail-trend verdicts.
#pragma once

#include <string>
#include <vector>

namespace dwlab {

struct TimeSeries {
  std::vector<double> times;   // ascending, > 0
  std::vector<double> values;  // nonnegative
  std::string label;
  double normalization = 1.0;  // constant already divided out of `values`

  std::size_t size() const { return times.size(); }
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;     // in log space: log f = slope*log t + intercept
  double rms_residual = 0.0;  // RMS of log-log residuals
  double t_lo = 0.0;
  double t_hi = 0.0;
  int count = 0;
};

enum class BoundModifier { none, log_factor };

// Certificate that sup_t t^p f(t) (or t^p f(t)/log t) over [t_lo, t_hi] is
// finite and has stopped growing. "Stabilized" means the running sup at the
// start of the last quartile of samples is within 20% of the final sup, i.e.
// the window's tail contributed < 20% new growth.
struct BoundCertificate {
  double exponent = 0.0;
  BoundModifier modifier = BoundModifier::none;
  double sup_value = 0.0;
  double arg_sup = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  bool stabilized = false;
  double last_quartile_ratio = 0.0;  // running sup at 3rd quartile / final sup
};

struct TailTrendVerdict {
  bool decreasing = false;  // t^p f(t) strictly decreasing over the last half
  double first_violation_t = 0.0;
  int checked = 0;
};

// Least-squares line on (log t, log f) over the window. Requires >= 8 samples
// in window and strictly positive values (zeros signal decay to the floor;
// the caller should shrink the window).
RateFit fit_loglog(const TimeSeries& series, double t_lo, double t_hi);

BoundCertificate certify_bound(const TimeSeries& series, double p, BoundModifier modifier,
                               double t_lo, double t_hi);

// Checkable surrogate for lim t^p f(t) = 0: the weighted series must be
// strictly decreasing across the last half of the window.
TailTrendVerdict tail_trend_to_zero(const TimeSeries& series, double p, double t_lo,
                                    double t_hi);

// Log-uniform sample times, endpoints included.
std::vector<double> geometric_times(double t0, double t1, int count);
std::vector<double> uniform_times(double t0, double t1, int count);

}  // namespace dwlab
