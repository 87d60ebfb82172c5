#pragma once

#include "iontrap/errors.hpp"
#include "iontrap/fock.hpp"
#include "iontrap/hamiltonian.hpp"

#include <Eigen/Dense>

#include <vector>

namespace iontrap {

/// Dense density matrix on spin (x) vibration (x) field.
struct TripartiteState {
  Eigen::MatrixXcd matrix;
  TripartiteDims dims;

  cdouble trace() const { return matrix.trace(); }
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
  double purity() const { return matrix.cwiseAbs2().sum(); }

  cdouble operator()(Spin s, int m, int n, Spin s2, int m2, int n2) const {
    return matrix(dims.index(s, m, n), dims.index(s2, m2, n2));
  }

  /// Diagonal of the reduced vibrational state.
  std::vector<double> vib_populations() const {
    std::vector<double> p(static_cast<std::size_t>(dims.vib_dim()), 0.0);
    for (int s = 0; s < 2; ++s)
      for (int m = 0; m < dims.vib_dim(); ++m)
        for (int n = 0; n < dims.field_dim(); ++n) {
          const int i = dims.index(s, m, n);
          p[static_cast<std::size_t>(m)] += matrix(i, i).real();
        }
    return p;
  }

  /// Distribution of n + s (photons plus atomic excitation).
  std::vector<double> excitation_populations() const {
    std::vector<double> p(static_cast<std::size_t>(dims.field_dim()) + 1, 0.0);
    for (int s = 0; s < 2; ++s)
      for (int m = 0; m < dims.vib_dim(); ++m)
        for (int n = 0; n < dims.field_dim(); ++n) {
          const int i = dims.index(s, m, n);
          p[static_cast<std::size_t>(n + s)] += matrix(i, i).real();
        }
    return p;
  }
};

/// |e><e| (x) rho_v (x) rho_f for number-diagonal mode states. Distributions
/// shorter than the space are zero padded; longer ones are rejected.
inline TripartiteState initial_density(const ModeDistribution& field0,
                                       const ModeDistribution& vib0,
                                       const TripartiteDims& dims) {
  if (field0.cutoff() > dims.n_field || vib0.cutoff() > dims.n_vib)
    throw DimensionMismatch("initial_density: distribution exceeds the space");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dims.size(), dims.size());
  for (int m = 0; m <= vib0.cutoff(); ++m)
    for (int n = 0; n <= field0.cutoff(); ++n) {
      const int i = dims.index(Spin::excited, m, n);
      rho(i, i) = vib0[static_cast<std::size_t>(m)] *
                  field0[static_cast<std::size_t>(n)];
    }
  return {std::move(rho), dims};
}

} // namespace iontrap
