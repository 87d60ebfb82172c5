#pragma once

// Brute-force reference dynamics: exact exponentiation of a Hermitian
// Hamiltonian through its eigendecomposition, exp(-iHt) = V exp(-i Lambda t) V^dagger.
// One decomposition serves a whole time grid.

#include "iontrap/closed_form.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/hamiltonian.hpp"
#include "iontrap/state.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace iontrap {

enum class HamiltonianSource { full_h, expanded_h, rwa_h, other };

inline std::string_view to_string(HamiltonianSource s) {
  switch (s) {
  case HamiltonianSource::full_h: return "full_h";
  case HamiltonianSource::expanded_h: return "expanded_h";
  case HamiltonianSource::rwa_h: return "rwa_h";
  case HamiltonianSource::other: return "other";
  }
  return "other";
}

struct SpectralPropagator {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  HamiltonianSource source = HamiltonianSource::other;
  TripartiteDims dims;

  Eigen::MatrixXcd reconstruct() const {
    return eigenvectors * eigenvalues.cast<cdouble>().asDiagonal() *
           eigenvectors.adjoint();
  }

  // exp(-i H gt)
  Eigen::MatrixXcd unitary(double gt) const {
    const Eigen::VectorXcd phases =
        (eigenvalues * (-gt)).unaryExpr([](double x) { return std::polar(1.0, x); });
    return eigenvectors * phases.asDiagonal() * eigenvectors.adjoint();
  }
};

/// Full spectral decomposition. Rejects H with max |H - H^dagger| above
/// 1e-12 relative to its largest entry.
inline SpectralPropagator diagonalize(const TripartiteOperator& h,
                                      HamiltonianSource source = HamiltonianSource::other) {
  if (h.matrix.rows() != h.matrix.cols() || h.matrix.rows() != h.dims.size())
    throw DimensionMismatch("diagonalize: matrix does not match its dims");
  const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
  const double dev = max_hermitian_deviation(h.matrix);
  if (dev > 1e-12 * scale)
    throw ContractViolation("diagonalize: input is not Hermitian (deviation " +
                            std::to_string(dev) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h.matrix);
  if (eig.info() != Eigen::Success)
    throw NumericalIntegrityError("diagonalize: eigensolver did not converge");
  return {eig.eigenvalues(), eig.eigenvectors(), source, h.dims};
}

/// rho(gt) = exp(-iH gt) rho0 exp(iH gt).
inline TripartiteState oracle_evolve(const SpectralPropagator& prop,
                                     const TripartiteState& rho0, double gt) {
  if (!(rho0.dims == prop.dims))
    throw DimensionMismatch("oracle_evolve: state and propagator dims differ");
  if (gt == 0.0)
    return rho0;
  const Eigen::MatrixXcd u = prop.unitary(gt);
  return {u * rho0.matrix * u.adjoint(), rho0.dims};
}

/// Tr[sigma_z rho]. The imaginary part must vanish to 1e-10.
inline double inversion_from_density(const TripartiteState& rho) {
  const TripartiteDims& d = rho.dims;
  CompensatedSum re;
  double im = 0.0;
  for (int s = 0; s < 2; ++s)
    for (int m = 0; m < d.vib_dim(); ++m)
      for (int n = 0; n < d.field_dim(); ++n) {
        const int i = d.index(s, m, n);
        const double sign = s == 1 ? 1.0 : -1.0;
        re.add(sign * rho.matrix(i, i).real());
        im += sign * rho.matrix(i, i).imag();
      }
  if (std::abs(im) > 1e-10)
    throw NumericalIntegrityError("inversion_from_density: imaginary residue " +
                                  std::to_string(im));
  return re.value();
}

/// Tr[op rho], real part; the imaginary residue must vanish to 1e-10
/// relative to the largest entry of op.
inline double expectation(const TripartiteState& rho, const TripartiteOperator& op) {
  if (!(rho.dims == op.dims))
    throw DimensionMismatch("expectation: state and operator dims differ");
  const cdouble v = (op.matrix.transpose().cwiseProduct(rho.matrix)).sum();
  const double scale = std::max(1.0, op.matrix.cwiseAbs().maxCoeff());
  if (std::abs(v.imag()) > 1e-10 * scale)
    throw NumericalIntegrityError("expectation: imaginary residue " +
                                  std::to_string(v.imag()));
  return v.real();
}

/// W(gt) on a whole grid without materializing rho(gt): in the eigenbasis
/// W(t) = sum_{kl} Z_lk A_kl exp(-i (lambda_k - lambda_l) t), with
/// A = V^dagger rho0 V and Z = V^dagger sigma_z V. O(D^2) per sample.
inline InversionTrace oracle_inversion_trace(const SpectralPropagator& prop,
                                             const TripartiteState& rho0,
                                             const std::vector<double>& grid) {
  if (!(rho0.dims == prop.dims))
    throw DimensionMismatch("oracle_inversion_trace: state and propagator dims differ");
  const Eigen::MatrixXcd& v = prop.eigenvectors;
  const Eigen::VectorXcd z = sigma_z_operator(prop.dims).matrix.diagonal();
  const Eigen::MatrixXcd a = v.adjoint() * rho0.matrix * v;
  const Eigen::MatrixXcd zt = v.adjoint() * z.asDiagonal() * v;
  const Eigen::MatrixXcd weights = zt.transpose().cwiseProduct(a);

  InversionTrace out;
  out.provenance = TraceSource::oracle;
  out.times = grid;
  out.values.resize(grid.size());
  const double mass = rho0.trace().real();
  out.retained_mass = mass;
  out.tail_bound = std::max(0.0, 1.0 - mass);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXcd u = (prop.eigenvalues * (-grid[k]))
                                   .unaryExpr([](double x) { return std::polar(1.0, x); });
    const cdouble w = u.transpose() * (weights * u.conjugate());
    if (std::abs(w.imag()) > 1e-10)
      throw NumericalIntegrityError("oracle_inversion_trace: imaginary residue " +
                                    std::to_string(w.imag()) + " at gt = " +
                                    std::to_string(grid[k]));
    out.values[k] = w.real();
  }
  return out;
}

struct DeviationReport {
  double max_abs = 0.0;
  double rms = 0.0;
  double argmax_gt = 0.0;
};

/// Pointwise deviation statistics of two traces sampled on the same grid.
inline DeviationReport compare_traces(const InversionTrace& a, const InversionTrace& b) {
  if (a.times != b.times)
    throw DimensionMismatch("compare_traces: time grids differ");
  DeviationReport r;
  if (a.size() == 0)
    return r;
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a.values[k] - b.values[k]);
    sq += d * d;
    if (d > r.max_abs) {
      r.max_abs = d;
      r.argmax_gt = a.times[k];
    }
  }
  r.rms = std::sqrt(sq / static_cast<double>(a.size()));
  return r;
}

} // namespace iontrap
