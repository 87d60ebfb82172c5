#pragma once

// Analytic dynamics of the carrier-resonant intensity-dependent
// Jaynes-Cummings model
//
//     H = [1 - eta^2 (1 + 2 m)/2] (sigma_- b^dagger + sigma_+ b)    (units of g)
//
// m = a^dagger a is conserved, so every vibrational level contributes an
// ordinary JCM with coupling kappa_m = 1 - eta^2 (1 + 2m)/2. The doublet
// {|e, m, n>, |g, m, n+1>} rotates at Omega(m, n) = kappa_m sqrt(n + 1).

#include "iontrap/errors.hpp"
#include "iontrap/fock.hpp"
#include "iontrap/hamiltonian.hpp"
#include "iontrap/state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

enum class TraceSource { double_sum, poisson_closed, oracle };

inline std::string_view to_string(TraceSource s) {
  switch (s) {
  case TraceSource::double_sum: return "double_sum";
  case TraceSource::poisson_closed: return "poisson_closed";
  case TraceSource::oracle: return "oracle";
  }
  return "oracle";
}

/// Sampled population inversion W(gt).
struct InversionTrace {
  std::vector<double> times;
  std::vector<double> values;
  TraceSource provenance = TraceSource::double_sum;
  // Product of the retained initial masses; W(0) equals this for |e>.
  double retained_mass = 1.0;
  // Upper bound on |W_exact - W| from the discarded populations.
  double tail_bound = 0.0;

  std::size_t size() const { return times.size(); }
};

/// Throws NumericalIntegrityError if any |W| exceeds the retained mass.
inline void check_inversion_bounds(const InversionTrace& trace,
                                   double slack = 1e-9) {
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (!(std::abs(trace.values[i]) <= trace.retained_mass + slack))
      throw NumericalIntegrityError(
          "inversion trace: |W| = " + std::to_string(trace.values[i]) +
          " at gt = " + std::to_string(trace.times[i]) +
          " exceeds retained mass " + std::to_string(trace.retained_mass));
}

/// Neumaier's compensated summation.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Effective coupling 1 - eta^2 (1 + 2m)/2 of vibrational level m.
inline double effective_coupling(double eta, int m) {
  return 1.0 - eta * eta * (1.0 + 2.0 * m) / 2.0;
}

/// Immutable table of Omega(m, n) = kappa_m sqrt(n + 1) for the truncated
/// space. Construction fails when kappa at the top vibrational level is no
/// longer positive.
class ClosedFormPropagator {
public:
  ClosedFormPropagator(const SystemParams& params, const TruncationSpec& trunc)
      : params_(params), trunc_(trunc), dims_(trunc) {
    params_.validate();
    params_.require_carrier_resonance("ClosedFormPropagator");
    const double top = effective_coupling(params_.eta, trunc_.n_vib);
    if (!(top > 0.0))
      throw ExpansionInvalidError(
          "ClosedFormPropagator: eta^2 (1 + 2 N_v)/2 = " +
          std::to_string(1.0 - top) + " >= 1 at N_v = " +
          std::to_string(trunc_.n_vib) +
          "; the eta^2 expansion needs eta^2 m small");
    rabi_.resize(static_cast<std::size_t>(dims_.vib_dim() * dims_.field_dim()));
    for (int m = 0; m <= trunc_.n_vib; ++m)
      for (int n = 0; n <= trunc_.n_field; ++n)
        rabi_[slot(m, n)] = effective_coupling(params_.eta, m) * std::sqrt(n + 1.0);
  }

  const SystemParams& params() const { return params_; }
  const TruncationSpec& trunc() const { return trunc_; }
  const TripartiteDims& dims() const { return dims_; }

  double coupling(int m) const { return effective_coupling(params_.eta, m); }

  // Omega(m, n): half the W-frequency of the |e, m, n> <-> |g, m, n+1> doublet.
  double rabi(int m, int n) const { return rabi_[slot(m, n)]; }

  double max_rabi() const { return rabi(0, trunc_.n_field); }

private:
  std::size_t slot(int m, int n) const {
    return static_cast<std::size_t>(m * dims_.field_dim() + n);
  }

  SystemParams params_;
  TruncationSpec trunc_;
  TripartiteDims dims_;
  std::vector<double> rabi_;
};

/// U(gt) = C_{m;n+1}|e><e| + C_{m;n}|g><g| - i S_{m;n+1} b|e><g|
///         - i b^dagger S_{m;n+1}|g><e|.
///
/// The |e, m, N_f> -> |g, m, N_f + 1> transfer falls outside the space, so U
/// is unitary only on the subspace below the top field level.
inline TripartiteOperator evolution_operator(const ClosedFormPropagator& prop,
                                             double gt) {
  if (!(gt >= 0.0))
    throw ContractViolation("evolution_operator: gt must be >= 0");
  const TripartiteDims& d = prop.dims();
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d.size(), d.size());
  const cdouble minus_i(0.0, -1.0);
  for (int m = 0; m <= d.n_vib; ++m) {
    u(d.index(Spin::ground, m, 0), d.index(Spin::ground, m, 0)) = 1.0;
    for (int n = 0; n <= d.n_field; ++n) {
      const double phase = prop.rabi(m, n) * gt;
      const double c = std::cos(phase);
      const double s = std::sin(phase);
      u(d.index(Spin::excited, m, n), d.index(Spin::excited, m, n)) = c;
      if (n + 1 <= d.n_field) {
        const int e = d.index(Spin::excited, m, n);
        const int g = d.index(Spin::ground, m, n + 1);
        u(g, g) = c;
        u(g, e) = minus_i * s;
        u(e, g) = minus_i * s;
      }
    }
  }
  return {std::move(u), d};
}

/// Evolved state stored as one (spin (x) field) block per vibrational level.
///
/// With number-diagonal initial states no vibrational coherence ever
/// appears, so the tripartite matrix is block diagonal in m.
class VibBlockedState {
public:
  VibBlockedState(TripartiteDims dims, std::vector<Eigen::MatrixXcd> blocks)
      : dims_(dims), blocks_(std::move(blocks)) {}

  const TripartiteDims& dims() const { return dims_; }
  // Block index: s * (N_f + 1) + n.
  const Eigen::MatrixXcd& block(int m) const {
    return blocks_[static_cast<std::size_t>(m)];
  }

  double trace() const {
    double t = 0.0;
    for (const auto& b : blocks_) t += b.trace().real();
    return t;
  }

  double inversion() const {
    CompensatedSum w;
    const int f = dims_.field_dim();
    for (const auto& b : blocks_)
      for (int n = 0; n < f; ++n) {
        w.add(b(f + n, f + n).real());
        w.add(-b(n, n).real());
      }
    return w.value();
  }

  TripartiteState dense() const {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dims_.size(), dims_.size());
    const int f = dims_.field_dim();
    for (int m = 0; m < dims_.vib_dim(); ++m)
      for (int s1 = 0; s1 < 2; ++s1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int n1 = 0; n1 < f; ++n1)
            for (int n2 = 0; n2 < f; ++n2)
              rho(dims_.index(s1, m, n1), dims_.index(s2, m, n2)) =
                  block(m)(s1 * f + n1, s2 * f + n2);
    return {std::move(rho), dims_};
  }

private:
  TripartiteDims dims_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// rho(gt) for rho(0) = |e><e| (x) rho_f(0) (x) rho_v(0), assembled from the
/// four spin blocks
///
///     <e,n|rho|e,n>     = p_m q_n cos^2(Omega t)
///     <g,n+1|rho|g,n+1> = p_m q_n sin^2(Omega t)
///     <e,n|rho|g,n+1>   = i p_m q_n cos(Omega t) sin(Omega t)
///
/// with Omega = Omega(m, n). Population at the top field level leaks out of
/// the space through its |g, N_f + 1> partner; keep the field distribution
/// below N_f when the trace has to be conserved.
inline VibBlockedState evolve_density(const ModeDistribution& field0,
                                      const ModeDistribution& vib0,
                                      const ClosedFormPropagator& prop,
                                      double gt) {
  const TripartiteDims& d = prop.dims();
  if (field0.cutoff() > d.n_field || vib0.cutoff() > d.n_vib)
    throw DimensionMismatch("evolve_density: distribution exceeds the "
                            "propagator truncation");
  const int f = d.field_dim();
  const cdouble i(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(d.vib_dim()));
  for (int m = 0; m <= d.n_vib; ++m) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(2 * f, 2 * f);
    const double pm = vib0[static_cast<std::size_t>(m)];
    if (pm > 0.0) {
      for (int n = 0; n <= d.n_field; ++n) {
        const double w = pm * field0[static_cast<std::size_t>(n)];
        if (w == 0.0) continue;
        const double phase = prop.rabi(m, n) * gt;
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        b(f + n, f + n) = w * c * c;
        if (n + 1 < f) {
          b(n + 1, n + 1) = w * s * s;
          b(f + n, n + 1) = i * w * c * s;
          b(n + 1, f + n) = -i * w * c * s;
        }
      }
    }
    blocks.push_back(std::move(b));
  }
  return {d, std::move(blocks)};
}

/// Default sampling step min(0.05, pi / (20 Omega_max)).
inline double default_step(double max_rabi) {
  return std::min(0.05, std::numbers::pi / (20.0 * max_rabi));
}

/// Samples k * step for k = 0 .. floor(gt_max / step).
inline std::vector<double> uniform_grid(double gt_max, double step) {
  if (!(gt_max >= 0.0) || !(step > 0.0))
    throw ContractViolation("uniform_grid: need gt_max >= 0 and step > 0");
  const auto count = static_cast<std::size_t>(std::floor(gt_max / step + 1e-9)) + 1;
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k)
    t[k] = static_cast<double>(k) * step;
  return t;
}

namespace detail {

inline void require_nondecreasing(const std::vector<double>& grid,
                                  const char* who) {
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] >= grid[k - 1]))
      throw ContractViolation(std::string(who) + ": time grid must be nondecreasing");
}

} // namespace detail

/// W(gt) = sum_{m,n} p_m q_n cos(2 kappa_m sqrt(n + 1) gt), truncated at the
/// distribution cutoffs. The outer loop runs over m and the inner over n,
/// all terms feeding one compensated accumulator.
inline InversionTrace inversion_double_sum(const ModeDistribution& field0,
                                           const ModeDistribution& vib0,
                                           double eta,
                                           const std::vector<double>& grid) {
  detail::require_nondecreasing(grid, "inversion_double_sum");
  std::vector<double> freq;
  std::vector<double> weight;
  for (int m = 0; m <= vib0.cutoff(); ++m) {
    const double pm = vib0[static_cast<std::size_t>(m)];
    if (pm == 0.0) continue;
    const double kappa = effective_coupling(eta, m);
    for (int n = 0; n <= field0.cutoff(); ++n) {
      const double w = pm * field0[static_cast<std::size_t>(n)];
      if (w == 0.0) continue;
      freq.push_back(2.0 * kappa * std::sqrt(n + 1.0));
      weight.push_back(w);
    }
  }
  InversionTrace out;
  out.provenance = TraceSource::double_sum;
  out.times = grid;
  out.values.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CompensatedSum acc;
    const double t = grid[k];
    for (std::size_t j = 0; j < freq.size(); ++j)
      acc.add(weight[j] * std::cos(freq[j] * t));
    out.values[k] = acc.value();
  }
  out.retained_mass = field0.retained_mass() * vib0.retained_mass();
  out.tail_bound = std::max(0.0, 1.0 - out.retained_mass);
  return out;
}

/// Vibrational dephasing envelope exp{-mbar [1 - cos(2 eta^2 sqrt(n+1) gt)]}
/// of the n-th field term.
inline double poisson_envelope(double mbar, double eta, int n, double gt) {
  return std::exp(-mbar * (1.0 - std::cos(2.0 * eta * eta * std::sqrt(n + 1.0) * gt)));
}

/// Field-only sum W = sum_n q_n w_n(gt) after summing a coherent
/// vibrational distribution of mean mbar in closed form:
///
///     w_n = exp{-mbar [1 - cos B]} cos{2 (1 - eta^2/2) sqrt(n+1) gt - mbar sin B},
///     B   = 2 eta^2 sqrt(n+1) gt.
inline InversionTrace inversion_poisson_closed(const ModeDistribution& field0,
                                               double mbar, double eta,
                                               const std::vector<double>& grid) {
  detail::require_nondecreasing(grid, "inversion_poisson_closed");
  if (!(mbar >= 0.0))
    throw ContractViolation("inversion_poisson_closed: mbar must be >= 0");
  const double e2 = eta * eta;
  InversionTrace out;
  out.provenance = TraceSource::poisson_closed;
  out.times = grid;
  out.values.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CompensatedSum acc;
    const double t = grid[k];
    for (int n = 0; n <= field0.cutoff(); ++n) {
      const double q = field0[static_cast<std::size_t>(n)];
      if (q == 0.0) continue;
      const double root = std::sqrt(n + 1.0);
      const double beat = 2.0 * e2 * root * t;
      const double envelope = std::exp(-mbar * (1.0 - std::cos(beat)));
      acc.add(q * envelope *
              std::cos(2.0 * (1.0 - e2 / 2.0) * root * t - mbar * std::sin(beat)));
    }
    out.values[k] = acc.value();
  }
  // the vibrational sum is exact; only the field tail is missing
  out.retained_mass = field0.retained_mass();
  out.tail_bound = field0.tail_mass();
  return out;
}

/// |sum_m p_m exp(2 i eta^2 sqrt(l + 1) m gt)|: the vibrational beat of a
/// field number state |l>, periodic in gt with period pi / (eta^2 sqrt(l+1)).
inline double vib_beat_modulus(const ModeDistribution& vib0, double eta,
                               int field_level, double gt) {
  const double rate = 2.0 * eta * eta * std::sqrt(field_level + 1.0);
  double re = 0.0;
  double im = 0.0;
  for (int m = 0; m <= vib0.cutoff(); ++m) {
    const double p = vib0[static_cast<std::size_t>(m)];
    if (p == 0.0) continue;
    const double phase = rate * m * gt;
    re += p * std::cos(phase);
    im += p * std::sin(phase);
  }
  return std::hypot(re, im);
}

} // namespace iontrap
