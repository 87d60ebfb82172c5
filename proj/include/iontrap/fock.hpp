#pragma once

// Truncated Fock-space building blocks for one bosonic mode: ladder
// operators, number-basis population generators and the exact cosine of
// the position quadrature.

#include "iontrap/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

using cdouble = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-10;

// Slack allowed on sum(p_k) <= 1 for rounding in generated distributions.
inline constexpr double kMassSlack = 1e-12;

enum class DistributionKind { number, coherent, thermal, custom };

inline std::string_view to_string(DistributionKind kind) {
  switch (kind) {
  case DistributionKind::number: return "number";
  case DistributionKind::coherent: return "coherent";
  case DistributionKind::thermal: return "thermal";
  case DistributionKind::custom: return "custom";
  }
  return "custom";
}

/// Diagonal number-basis populations p_0..p_N of one mode.
///
/// The list is never renormalized: whatever mass the cutoff removed stays
/// visible through tail_mass(). Reads past the cutoff return 0.
class ModeDistribution {
public:
  ModeDistribution(std::vector<double> populations, DistributionKind kind,
                   double mean)
      : populations_(std::move(populations)), kind_(kind), mean_(mean) {
    if (populations_.empty())
      throw ContractViolation("ModeDistribution: empty population list");
    if (!(mean_ >= 0.0))
      throw ContractViolation("ModeDistribution: mean must be >= 0");
    for (double p : populations_)
      if (!(p >= 0.0))
        throw ContractViolation("ModeDistribution: negative population");
    if (retained_mass() > 1.0 + kMassSlack)
      throw ContractViolation("ModeDistribution: populations sum above 1");
    if (kind_ == DistributionKind::number &&
        std::count(populations_.begin(), populations_.end(), 1.0) != 1)
      throw ContractViolation(
          "ModeDistribution: number state needs exactly one unit population");
  }

  std::span<const double> populations() const { return populations_; }
  DistributionKind kind() const { return kind_; }
  double mean() const { return mean_; }
  int cutoff() const { return static_cast<int>(populations_.size()) - 1; }
  std::size_t size() const { return populations_.size(); }

  double operator[](std::size_t k) const {
    return k < populations_.size() ? populations_[k] : 0.0;
  }

  double retained_mass() const {
    return std::accumulate(populations_.begin(), populations_.end(), 0.0);
  }
  double tail_mass() const { return std::max(0.0, 1.0 - retained_mass()); }

  // Mean of the retained populations (differs from mean() by the tail).
  double retained_mean() const {
    double acc = 0.0;
    for (std::size_t k = 0; k < populations_.size(); ++k)
      acc += static_cast<double>(k) * populations_[k];
    return acc;
  }

  // Highest level carrying nonzero population, or -1 if all vanish.
  int highest_occupied() const {
    for (int k = cutoff(); k >= 0; --k)
      if (populations_[static_cast<std::size_t>(k)] > 0.0)
        return k;
    return -1;
  }

private:
  std::vector<double> populations_;
  DistributionKind kind_;
  double mean_;
};

/// Fock cutoffs for the vibrational and field modes plus the tail-mass
/// tolerance every generated distribution must respect.
struct TruncationSpec {
  int n_field = 0;
  int n_vib = 0;
  double tail_tol = kDefaultTailTol;

  TruncationSpec() = default;
  TruncationSpec(int field_cutoff, int vib_cutoff,
                 double tol = kDefaultTailTol)
      : n_field(field_cutoff), n_vib(vib_cutoff), tail_tol(tol) {
    if (n_field < 0 || n_vib < 0)
      throw ContractViolation("TruncationSpec: cutoffs must be >= 0");
    if (!(tail_tol > 0.0 && tail_tol < 1.0))
      throw ContractViolation("TruncationSpec: tail_tol must lie in (0, 1)");
  }

  int field_dim() const { return n_field + 1; }
  int vib_dim() const { return n_vib + 1; }
};

namespace detail {

inline void check_mass(const std::vector<double>& p, double tail_tol,
                       std::string_view what) {
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  if (mass < 1.0 - tail_tol) {
    std::ostringstream msg;
    msg << what << ": cutoff " << p.size() - 1 << " leaves tail mass "
        << std::setprecision(3) << 1.0 - mass << " > " << tail_tol;
    throw TruncationError(msg.str());
  }
}

} // namespace detail

/// Poisson weights e^{-mean} mean^k / k! for k = 0..cutoff.
inline ModeDistribution coherent_populations(double mean, int cutoff,
                                             double tail_tol = kDefaultTailTol) {
  if (!(mean >= 0.0))
    throw ContractViolation("coherent_populations: mean must be >= 0");
  if (cutoff < 0)
    throw ContractViolation("coherent_populations: cutoff must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(cutoff) + 1, 0.0);
  if (mean == 0.0) {
    p[0] = 1.0;
  } else {
    const double log_mean = std::log(mean);
    for (int k = 0; k <= cutoff; ++k)
      p[static_cast<std::size_t>(k)] =
          std::exp(-mean + k * log_mean - std::lgamma(k + 1.0));
  }
  detail::check_mass(p, tail_tol, "coherent_populations");
  return {std::move(p), DistributionKind::coherent, mean};
}

inline ModeDistribution number_populations(int level, int cutoff) {
  if (cutoff < 0)
    throw ContractViolation("number_populations: cutoff must be >= 0");
  if (level < 0 || level > cutoff)
    throw OutOfRangeError("number_populations: level " +
                          std::to_string(level) + " outside [0, " +
                          std::to_string(cutoff) + "]");
  std::vector<double> p(static_cast<std::size_t>(cutoff) + 1, 0.0);
  p[static_cast<std::size_t>(level)] = 1.0;
  return {std::move(p), DistributionKind::number, static_cast<double>(level)};
}

/// Bose-Einstein weights mean^k / (1 + mean)^{k+1}, not renormalized.
inline ModeDistribution thermal_populations(double mean, int cutoff,
                                            double tail_tol = kDefaultTailTol) {
  if (!(mean >= 0.0))
    throw ContractViolation("thermal_populations: mean must be >= 0");
  if (cutoff < 0)
    throw ContractViolation("thermal_populations: cutoff must be >= 0");
  std::vector<double> p(static_cast<std::size_t>(cutoff) + 1, 0.0);
  if (mean == 0.0) {
    p[0] = 1.0;
  } else {
    const double log_ratio = std::log(mean / (1.0 + mean));
    for (int k = 0; k <= cutoff; ++k)
      p[static_cast<std::size_t>(k)] = std::exp(k * log_ratio) / (1.0 + mean);
  }
  detail::check_mass(p, tail_tol, "thermal_populations");
  return {std::move(p), DistributionKind::thermal, mean};
}

inline ModeDistribution custom_populations(std::vector<double> populations) {
  ModeDistribution tmp(populations, DistributionKind::custom, 0.0);
  const double mean = tmp.retained_mean();
  return {std::move(populations), DistributionKind::custom, mean};
}

/// How a mode is prepared: `mean` is used by coherent/thermal, `level` by
/// number states.
struct StateSpec {
  DistributionKind kind = DistributionKind::coherent;
  double mean = 0.0;
  int level = 0;

  double nominal_mean() const {
    return kind == DistributionKind::number ? static_cast<double>(level)
                                            : mean;
  }
};

/// Default cutoff for a preparation: ceil(mean + 8 sqrt(mean) + 10) for
/// coherent states, the smallest N whose geometric tail is below tail_tol
/// for thermal states, and the level itself for number states.
inline int default_cutoff(const StateSpec& state,
                          double tail_tol = kDefaultTailTol) {
  switch (state.kind) {
  case DistributionKind::number:
    return std::max(state.level, 0);
  case DistributionKind::coherent:
    return static_cast<int>(
        std::ceil(state.mean + 8.0 * std::sqrt(state.mean) + 10.0));
  case DistributionKind::thermal: {
    if (state.mean <= 0.0)
      return 0;
    // P(k > N) = r^{N+1}, r = mean / (1 + mean)
    const double r = state.mean / (1.0 + state.mean);
    return std::max(0, static_cast<int>(std::ceil(std::log(tail_tol) /
                                                  std::log(r))) - 1);
  }
  case DistributionKind::custom:
    break;
  }
  throw ContractViolation("default_cutoff: custom distributions carry their own cutoff");
}

inline ModeDistribution make_populations(const StateSpec& state, int cutoff,
                                         double tail_tol = kDefaultTailTol) {
  switch (state.kind) {
  case DistributionKind::number:
    return number_populations(state.level, cutoff);
  case DistributionKind::coherent:
    return coherent_populations(state.mean, cutoff, tail_tol);
  case DistributionKind::thermal:
    return thermal_populations(state.mean, cutoff, tail_tol);
  case DistributionKind::custom:
    break;
  }
  throw ContractViolation("make_populations: custom distributions are built "
                          "with custom_populations()");
}

/// Cutoffs from the default rules for both modes; fails with
/// TruncationError if either default leaves more than tail_tol behind.
inline TruncationSpec truncation_for(const StateSpec& field,
                                     const StateSpec& vib,
                                     double tail_tol = kDefaultTailTol) {
  TruncationSpec trunc(default_cutoff(field, tail_tol),
                       default_cutoff(vib, tail_tol), tail_tol);
  (void)make_populations(field, trunc.n_field, tail_tol);
  (void)make_populations(vib, trunc.n_vib, tail_tol);
  return trunc;
}

// ---------------------------------------------------------------------------
// Mode operators

enum class OperatorLabel {
  annihilation,
  creation,
  number,
  cosine_position,
  identity
};

struct ModeOperator {
  Eigen::MatrixXcd matrix;
  OperatorLabel label;

  int cutoff() const { return static_cast<int>(matrix.rows()) - 1; }
};

inline ModeOperator annihilation(int cutoff) {
  if (cutoff < 0)
    throw ContractViolation("annihilation: cutoff must be >= 0");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int k = 1; k <= cutoff; ++k)
    a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return {std::move(a), OperatorLabel::annihilation};
}

inline ModeOperator creation(int cutoff) {
  return {annihilation(cutoff).matrix.adjoint(), OperatorLabel::creation};
}

inline ModeOperator number_operator(int cutoff) {
  if (cutoff < 0)
    throw ContractViolation("number_operator: cutoff must be >= 0");
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k)
    n(k, k) = static_cast<double>(k);
  return {std::move(n), OperatorLabel::number};
}

inline ModeOperator identity_operator(int cutoff) {
  if (cutoff < 0)
    throw ContractViolation("identity_operator: cutoff must be >= 0");
  return {Eigen::MatrixXcd::Identity(cutoff + 1, cutoff + 1),
          OperatorLabel::identity};
}

// Levels computed above the cutoff and then discarded by cosine_position.
inline constexpr int kCosinePadding = 10;

/// cos(eta (a + a^dagger)) on levels 0..cutoff.
///
/// Evaluated through the eigendecomposition of the real symmetric
/// quadrature eta (a + a^dagger) on cutoff + 1 + kCosinePadding levels,
/// then cropped. Entries within roughly sqrt(cutoff) levels of the top still
/// feel the finite basis; only the lower part of the matrix should be
/// trusted at large eta sqrt(cutoff).
inline ModeOperator cosine_position(double eta, int cutoff) {
  if (!(eta >= 0.0))
    throw ContractViolation("cosine_position: eta must be >= 0");
  if (cutoff < 0)
    throw ContractViolation("cosine_position: cutoff must be >= 0");
  const int dim = cutoff + 1 + kCosinePadding;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) {
    const double s = eta * std::sqrt(static_cast<double>(k));
    x(k - 1, k) = s;
    x(k, k - 1) = s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x);
  const Eigen::VectorXd c = eig.eigenvalues().array().cos();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::MatrixXd full = v * c.asDiagonal() * v.transpose();
  Eigen::MatrixXd crop = full.topLeftCorner(cutoff + 1, cutoff + 1);
  // symmetrize away the last-bit asymmetry of the reconstruction
  crop = 0.5 * (crop + crop.transpose()).eval();
  return {crop.cast<cdouble>(), OperatorLabel::cosine_position};
}

/// Second-order expansion 1 - eta^2 (1 + 2 a^dagger a)/2
/// - eta^2 (a^dagger^2 + a^2)/2 of the cosine operator.
inline ModeOperator cosine_position_expanded(double eta, int cutoff) {
  if (cutoff < 0)
    throw ContractViolation("cosine_position_expanded: cutoff must be >= 0");
  const double e2 = eta * eta;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    m(k, k) = 1.0 - e2 * (1.0 + 2.0 * k) / 2.0;
    if (k + 2 <= cutoff) {
      // <k| a^2 |k+2> = sqrt((k+1)(k+2))
      const double s = -e2 * std::sqrt((k + 1.0) * (k + 2.0)) / 2.0;
      m(k, k + 2) = s;
      m(k + 2, k) = s;
    }
  }
  return {std::move(m), OperatorLabel::cosine_position};
}

} // namespace iontrap
