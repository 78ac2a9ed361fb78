#include "dwlab/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace dwlab {

namespace {

void check_series(const TimeSeries& s) {
  if (s.times.size() != s.values.size())
    throw std::invalid_argument("time series: times/values length mismatch");
  for (std::size_t i = 1; i < s.times.size(); ++i)
    if (!(s.times[i] > s.times[i - 1]))
      throw std::invalid_argument("time series: times must be strictly increasing");
}

std::vector<std::size_t> window_indices(const TimeSeries& s, double t_lo, double t_hi) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.times.size(); ++i)
    if (s.times[i] >= t_lo && s.times[i] <= t_hi) idx.push_back(i);
  return idx;
}

double weighted_value(const TimeSeries& s, std::size_t i, double p, BoundModifier m) {
  double w = std::pow(s.times[i], p) * s.values[i];
  if (m == BoundModifier::log_factor) {
    // t^p f(t) / log t; only meaningful for t > 1.
    w /= std::log(std::max(s.times[i], 1.0 + 1e-12));
  }
  return w;
}

}  // namespace

RateFit fit_loglog(const TimeSeries& series, double t_lo, double t_hi) {
  check_series(series);
  auto idx = window_indices(series, t_lo, t_hi);
  if (idx.size() < 8)
    throw std::invalid_argument("fit_loglog: fewer than 8 samples in window");
  for (auto i : idx)
    if (!(series.values[i] > 0.0))
      throw std::invalid_argument(
          "fit_loglog: nonpositive value in window (decay reached the floor; "
          "shrink the window)");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(idx.size());
  for (auto i : idx) {
    const double x = std::log(series.times[i]);
    const double y = std::log(series.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (auto i : idx) {
    const double r =
        std::log(series.values[i]) - (fit.slope * std::log(series.times[i]) + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.t_lo = series.times[idx.front()];
  fit.t_hi = series.times[idx.back()];
  fit.count = static_cast<int>(idx.size());
  return fit;
}

BoundCertificate certify_bound(const TimeSeries& series, double p, BoundModifier modifier,
                               double t_lo, double t_hi) {
  check_series(series);
  auto idx = window_indices(series, t_lo, t_hi);
  if (idx.empty()) throw std::invalid_argument("certify_bound: empty window");

  BoundCertificate cert;
  cert.exponent = p;
  cert.modifier = modifier;
  cert.t_lo = series.times[idx.front()];
  cert.t_hi = series.times[idx.back()];

  // Running sup, and its value when three quarters of the samples are in.
  const std::size_t q3 = idx.size() - idx.size() / 4;
  double running = 0.0, at_q3 = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double w = weighted_value(series, idx[k], p, modifier);
    if (w > running) {
      running = w;
      cert.arg_sup = series.times[idx[k]];
    }
    if (k + 1 == q3) at_q3 = running;
  }
  cert.sup_value = running;
  cert.last_quartile_ratio = running > 0.0 ? at_q3 / running : 1.0;
  cert.stabilized = cert.last_quartile_ratio >= 0.8;
  return cert;
}

TailTrendVerdict tail_trend_to_zero(const TimeSeries& series, double p, double t_lo,
                                    double t_hi) {
  check_series(series);
  auto idx = window_indices(series, t_lo, t_hi);
  TailTrendVerdict verdict;
  if (idx.size() < 4) return verdict;

  const std::size_t start = idx.size() / 2;
  verdict.decreasing = true;
  for (std::size_t k = start; k + 1 < idx.size(); ++k) {
    const double a = weighted_value(series, idx[k], p, BoundModifier::none);
    const double b = weighted_value(series, idx[k + 1], p, BoundModifier::none);
    ++verdict.checked;
    if (!(b < a)) {
      verdict.decreasing = false;
      verdict.first_violation_t = series.times[idx[k + 1]];
      break;
    }
  }
  return verdict;
}

std::vector<double> geometric_times(double t0, double t1, int count) {
  if (!(t0 > 0.0) || !(t1 > t0) || count < 2)
    throw std::invalid_argument("geometric_times: need 0 < t0 < t1 and count >= 2");
  std::vector<double> t(count);
  const double r = std::log(t1 / t0) / (count - 1);
  for (int i = 0; i < count; ++i) t[i] = t0 * std::exp(r * i);
  t.back() = t1;
  return t;
}

std::vector<double> uniform_times(double t0, double t1, int count) {
  if (!(t1 > t0) || count < 2)
    throw std::invalid_argument("uniform_times: need t0 < t1 and count >= 2");
  std::vector<double> t(count);
  const double dt = (t1 - t0) / (count - 1);
  for (int i = 0; i < count; ++i) t[i] = t0 + dt * i;
  return t;
}

}  // namespace dwlab
