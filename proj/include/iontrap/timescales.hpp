#pragma once

// Collapse and revival time estimates and their empirical counterparts.
//
// All times are scaled times g t. The estimates come from requiring
// neighbouring field terms (n, n+1) or vibrational terms (m, m+1) of the
// inversion double sum to rephase; the collapse times are scales, not sharp
// instants.

#include "iontrap/closed_form.hpp"
#include "iontrap/errors.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace iontrap {

namespace detail {

inline double field_denominator(double mbar, double eta, const char* who) {
  const double d = 1.0 - eta * eta * (1.0 + 2.0 * mbar) / 2.0;
  if (!(d > 0.0))
    throw ExpansionInvalidError(std::string(who) +
                                ": eta^2 (1 + 2 mbar)/2 >= 1, the effective "
                                "coupling is no longer positive");
  return d;
}

} // namespace detail

/// k-th field revival 2 k pi sqrt(nbar) / (1 - eta^2 (1 + 2 mbar)/2).
/// A field without photons (nbar = 0) gives 0.
inline double field_revival_time(double nbar, double mbar, double eta, int k = 1) {
  if (!(nbar >= 0.0) || !(mbar >= 0.0) || k < 1)
    throw ContractViolation("field_revival_time: need nbar, mbar >= 0 and k >= 1");
  const double d = detail::field_denominator(mbar, eta, "field_revival_time");
  return k * (2.0 * std::numbers::pi * std::sqrt(nbar) / d);
}

/// k-th vibrational (super-)revival k pi / (eta^2 sqrt(nbar + 1)); empty
/// when eta = 0 and the vibrational beat never develops.
inline std::optional<double> vib_revival_time(double nbar, double eta, int k = 1) {
  if (!(nbar >= 0.0) || !(eta >= 0.0) || k < 1)
    throw ContractViolation("vib_revival_time: need nbar, eta >= 0 and k >= 1");
  if (eta == 0.0)
    return std::nullopt;
  return k * (std::numbers::pi / (eta * eta * std::sqrt(nbar + 1.0)));
}

/// Field collapse scale 1 / (1 - eta^2 (1 + 2 mbar)/2).
inline double field_collapse_time(double mbar, double eta) {
  if (!(mbar >= 0.0))
    throw ContractViolation("field_collapse_time: mbar must be >= 0");
  return 1.0 / detail::field_denominator(mbar, eta, "field_collapse_time");
}

/// Vibrational collapse scale 1 / (eta^2 sqrt(mbar (nbar + 1))); empty when
/// mbar = 0 or eta = 0.
inline std::optional<double> vib_collapse_time(double nbar, double mbar,
                                               double eta) {
  if (!(nbar >= 0.0) || !(mbar >= 0.0) || !(eta >= 0.0))
    throw ContractViolation("vib_collapse_time: arguments must be >= 0");
  if (mbar == 0.0 || eta == 0.0)
    return std::nullopt;
  return 1.0 / (eta * eta * std::sqrt(mbar * (nbar + 1.0)));
}

struct RevivalPeak {
  double gt_center;
  double peak;
};

struct TimescaleReport {
  std::vector<double> field_revivals;
  std::vector<double> vib_revivals;
  double field_collapse = 0.0;
  std::optional<double> vib_collapse;
  std::vector<RevivalPeak> detected_revivals;
};

/// Predictions for k = 1..count. vib_revivals is left empty at eta = 0.
inline TimescaleReport predict_timescales(double nbar, double mbar, double eta,
                                          int count = 3) {
  TimescaleReport r;
  for (int k = 1; k <= count; ++k) {
    r.field_revivals.push_back(field_revival_time(nbar, mbar, eta, k));
    if (auto v = vib_revival_time(nbar, eta, k))
      r.vib_revivals.push_back(*v);
  }
  r.field_collapse = field_collapse_time(mbar, eta);
  r.vib_collapse = vib_collapse_time(nbar, mbar, eta);
  return r;
}

// ---------------------------------------------------------------------------
// Empirical analysis

inline constexpr int kMinWindowSamples = 50;
inline constexpr double kMinProminence = 0.05;

/// Five periods of the dominant W oscillation 2 kappa(mbar) sqrt(nbar + 1).
inline double default_envelope_window(double nbar, double mbar, double eta) {
  const double kappa = std::abs(1.0 - eta * eta * (1.0 + 2.0 * mbar) / 2.0);
  return 5.0 * std::numbers::pi / (kappa * std::sqrt(nbar + 1.0));
}

namespace detail {

inline int window_samples(const InversionTrace& trace, double window) {
  if (trace.size() < 2)
    throw ResolutionError("envelope: trace needs at least two samples");
  const double step =
      (trace.times.back() - trace.times.front()) / static_cast<double>(trace.size() - 1);
  if (!(step > 0.0))
    throw ResolutionError("envelope: trace spans zero time");
  const double samples = window / step;
  if (!(samples >= kMinWindowSamples))
    throw ResolutionError("envelope: window " + std::to_string(window) +
                          " holds " + std::to_string(samples) + " samples, need " +
                          std::to_string(kMinWindowSamples));
  return static_cast<int>(std::lround(samples));
}

} // namespace detail

/// Centered sliding maximum of |W| over `window` (in gt).
inline std::vector<double> sliding_envelope(const InversionTrace& trace,
                                            double window) {
  const int width = detail::window_samples(trace, window);
  const int half = width / 2;
  const int n = static_cast<int>(trace.size());
  std::vector<double> env(trace.size());
  std::deque<int> q;  // indices with decreasing |W|
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int hi = std::min(n - 1, i + half);
    for (; next <= hi; ++next) {
      const double v = std::abs(trace.values[static_cast<std::size_t>(next)]);
      while (!q.empty() && std::abs(trace.values[static_cast<std::size_t>(q.back())]) <= v)
        q.pop_back();
      q.push_back(next);
    }
    while (q.front() < i - half)
      q.pop_front();
    env[static_cast<std::size_t>(i)] =
        std::abs(trace.values[static_cast<std::size_t>(q.front())]);
  }
  return env;
}

/// Interior local maxima of the sliding envelope with topographic
/// prominence >= min_prominence. Flat tops report their midpoint; maxima
/// touching either end of the trace are not revivals and are skipped.
inline std::vector<RevivalPeak> detect_revivals(const InversionTrace& trace,
                                                double window,
                                                double min_prominence = kMinProminence) {
  const std::vector<double> env = sliding_envelope(trace, window);
  const std::size_t n = env.size();
  std::vector<RevivalPeak> peaks;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(env[i] > env[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && env[j + 1] == env[i])
      ++j;
    if (j + 1 >= n)
      break;
    if (env[j + 1] < env[i]) {
      const double top = env[i];
      double left_min = top;
      for (std::size_t l = i; l-- > 0;) {
        if (env[l] > top) break;
        left_min = std::min(left_min, env[l]);
      }
      double right_min = top;
      for (std::size_t r = j + 1; r < n; ++r) {
        if (env[r] > top) break;
        right_min = std::min(right_min, env[r]);
      }
      if (top - std::max(left_min, right_min) >= min_prominence) {
        const std::size_t mid = i + (j - i) / 2;
        peaks.push_back({trace.times[mid], top});
      }
    }
    i = j + 1;
  }
  return peaks;
}

/// Largest envelope value with gt in [center (1 - rel), center (1 + rel)].
inline double envelope_peak_near(const InversionTrace& trace, double window,
                                 double center, double rel = 0.1) {
  const std::vector<double> env = sliding_envelope(trace, window);
  double best = 0.0;
  for (std::size_t k = 0; k < env.size(); ++k)
    if (trace.times[k] >= center * (1.0 - rel) && trace.times[k] <= center * (1.0 + rel))
      best = std::max(best, env[k]);
  return best;
}

/// First gt at which the envelope drops below fraction * envelope(0).
inline std::optional<double> detect_collapse(const InversionTrace& trace,
                                             double window,
                                             double fraction = std::exp(-1.0)) {
  const std::vector<double> env = sliding_envelope(trace, window);
  const double threshold = fraction * env.front();
  for (std::size_t k = 0; k < env.size(); ++k)
    if (env[k] < threshold)
      return trace.times[k];
  return std::nullopt;
}

} // namespace iontrap
