#pragma once

// Hamiltonians of the ion-cavity system on truncated spaces.
//
// Units: hbar = 1 and every energy is expressed in units of the coupling g,
// so time enters only as the scaled time g t. Tensor ordering is
// spin (x) vibration (x) field, row-major:
//
//     flat = s * (N_v + 1)(N_f + 1) + m * (N_f + 1) + n,  s = 0 |g>, s = 1 |e>

#include "iontrap/errors.hpp"
#include "iontrap/fock.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace iontrap {

/// Physical parameters. nu, omega and omega0 are given in units of g; g
/// itself (inverse time) only converts scaled time back to physical time.
struct SystemParams {
  double g = 1.0;
  double eta = 0.0;
  double nu = 50.0;
  double omega = 500.0;
  double omega0 = 500.0;

  void validate() const {
    if (!(g > 0.0)) throw ContractViolation("SystemParams: g must be > 0");
    if (!(eta >= 0.0)) throw ContractViolation("SystemParams: eta must be >= 0");
    if (!(nu > 0.0)) throw ContractViolation("SystemParams: nu must be > 0");
    if (!(omega > 0.0)) throw ContractViolation("SystemParams: omega must be > 0");
    if (!(omega0 > 0.0)) throw ContractViolation("SystemParams: omega0 must be > 0");
  }

  double detuning() const { return omega0 - omega; }
  bool carrier_resonant() const { return omega0 == omega; }
  double physical_time(double gt) const { return gt / g; }

  void require_carrier_resonance(const char* who) const {
    if (!carrier_resonant())
      throw ResonanceError(std::string(who) +
                           ": carrier resonance needs omega0 == omega (got "
                           "detuning " + std::to_string(detuning()) + ")");
  }
};

/// Carrier-resonant parameters with the default frequency hierarchy
/// omega = omega0 = 500 g, nu = 50 g.
inline SystemParams carrier_params(double eta) {
  SystemParams p;
  p.eta = eta;
  return p;
}

enum class Spin : int { ground = 0, excited = 1 };

struct TripartiteDims {
  int n_vib = 0;
  int n_field = 0;

  TripartiteDims() = default;
  TripartiteDims(int vib_cutoff, int field_cutoff)
      : n_vib(vib_cutoff), n_field(field_cutoff) {}
  explicit TripartiteDims(const TruncationSpec& t)
      : n_vib(t.n_vib), n_field(t.n_field) {}

  int vib_dim() const { return n_vib + 1; }
  int field_dim() const { return n_field + 1; }
  int size() const { return 2 * vib_dim() * field_dim(); }

  int index(int s, int m, int n) const {
    return (s * vib_dim() + m) * field_dim() + n;
  }
  int index(Spin s, int m, int n) const {
    return index(static_cast<int>(s), m, n);
  }

  friend bool operator==(const TripartiteDims&, const TripartiteDims&) = default;
};

struct TripartiteOperator {
  Eigen::MatrixXcd matrix;
  TripartiteDims dims;

  cdouble operator()(Spin s, int m, int n, Spin s2, int m2, int n2) const {
    return matrix(dims.index(s, m, n), dims.index(s2, m2, n2));
  }
};

/// Spin (x) vibration operator, flat = s * (N_v + 1) + m.
struct BipartiteOperator {
  Eigen::MatrixXcd matrix;
  int n_vib = 0;

  int index(Spin s, int m) const {
    return static_cast<int>(s) * (n_vib + 1) + m;
  }
  cdouble operator()(Spin s, int m, Spin s2, int m2) const {
    return matrix(index(s, m), index(s2, m2));
  }
};

inline double max_hermitian_deviation(const Eigen::MatrixXcd& h) {
  if (h.size() == 0)
    return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

namespace spin {
// Two-level matrices in the (|g>, |e>) basis.
inline Eigen::Matrix2cd raising() {  // sigma_+ = |e><g|
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(1, 0) = 1.0;
  return m;
}
inline Eigen::Matrix2cd lowering() { return raising().adjoint(); }
inline Eigen::Matrix2cd sigma_x() { return raising() + lowering(); }
inline Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}
inline Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
} // namespace spin

/// Kronecker product spin (x) vib (x) field, skipping zero factors.
inline Eigen::MatrixXcd embed(const Eigen::Matrix2cd& s,
                              const Eigen::MatrixXcd& vib,
                              const Eigen::MatrixXcd& field) {
  const TripartiteDims dims(static_cast<int>(vib.rows()) - 1,
                            static_cast<int>(field.rows()) - 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dims.size(), dims.size());
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      if (s(s1, s2) == 0.0) continue;
      for (int m1 = 0; m1 < dims.vib_dim(); ++m1)
        for (int m2 = 0; m2 < dims.vib_dim(); ++m2) {
          const cdouble sv = s(s1, s2) * vib(m1, m2);
          if (sv == 0.0) continue;
          for (int n1 = 0; n1 < dims.field_dim(); ++n1)
            for (int n2 = 0; n2 < dims.field_dim(); ++n2) {
              const cdouble f = field(n1, n2);
              if (f == 0.0) continue;
              out(dims.index(s1, m1, n1), dims.index(s2, m2, n2)) = sv * f;
            }
        }
    }
  return out;
}

inline TripartiteOperator sigma_z_operator(const TripartiteDims& dims) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dims.size(), dims.size());
  for (int s = 0; s < 2; ++s)
    for (int v = 0; v < dims.vib_dim(); ++v)
      for (int n = 0; n < dims.field_dim(); ++n) {
        const int i = dims.index(s, v, n);
        m(i, i) = s == 1 ? 1.0 : -1.0;
      }
  return {std::move(m), dims};
}

inline TripartiteOperator vib_number_operator(const TripartiteDims& dims) {
  return {embed(spin::identity(), number_operator(dims.n_vib).matrix,
                identity_operator(dims.n_field).matrix),
          dims};
}

/// Photon number plus atomic excitation, b^dagger b + |e><e|.
inline TripartiteOperator excitation_number_operator(const TripartiteDims& dims) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dims.size(), dims.size());
  for (int s = 0; s < 2; ++s)
    for (int v = 0; v < dims.vib_dim(); ++v)
      for (int n = 0; n < dims.field_dim(); ++n) {
        const int i = dims.index(s, v, n);
        m(i, i) = static_cast<double>(n + s);
      }
  return {std::move(m), dims};
}

namespace detail {

inline Eigen::MatrixXcd field_quadrature(int n_field) {
  const ModeOperator b = annihilation(n_field);
  return b.matrix + b.matrix.adjoint();
}

inline Eigen::MatrixXcd free_part(const SystemParams& p,
                                  const TripartiteDims& dims) {
  const Eigen::MatrixXcd iv = identity_operator(dims.n_vib).matrix;
  const Eigen::MatrixXcd iff = identity_operator(dims.n_field).matrix;
  return p.nu * embed(spin::identity(), number_operator(dims.n_vib).matrix, iff) +
         p.omega * embed(spin::identity(), iv, number_operator(dims.n_field).matrix) +
         (p.omega0 / 2.0) * embed(spin::sigma_z(), iv, iff);
}

} // namespace detail

/// Coupling (sigma_+ + sigma_-)(b^dagger + b) cos eta(a^dagger + a) with the
/// exact cosine operator, in units of g.
inline TripartiteOperator build_exact_interaction(const SystemParams& params,
                                                  const TruncationSpec& trunc) {
  params.validate();
  const TripartiteDims dims(trunc);
  return {embed(spin::sigma_x(), cosine_position(params.eta, dims.n_vib).matrix,
                detail::field_quadrature(dims.n_field)),
          dims};
}

/// Free energies of all three subsystems plus the exact-cosine coupling.
inline TripartiteOperator build_full_hamiltonian(const SystemParams& params,
                                                 const TruncationSpec& trunc) {
  TripartiteOperator h = build_exact_interaction(params, trunc);
  h.matrix += detail::free_part(params, h.dims);
  return h;
}

/// Coupling with the cosine replaced by its second-order expansion in eta.
inline TripartiteOperator
build_expanded_interaction(const SystemParams& params,
                           const TruncationSpec& trunc) {
  params.validate();
  const TripartiteDims dims(trunc);
  return {embed(spin::sigma_x(),
                cosine_position_expanded(params.eta, dims.n_vib).matrix,
                detail::field_quadrature(dims.n_field)),
          dims};
}

/// Intensity-dependent Jaynes-Cummings coupling at carrier resonance,
/// [1 - eta^2 (1 + 2 a^dagger a)/2] (sigma_- b^dagger + sigma_+ b), in units of g.
///
/// The result is checked to be block diagonal in the vibrational number m
/// and in the excitation number n + s.
inline TripartiteOperator
build_carrier_rwa_interaction(const SystemParams& params,
                              const TruncationSpec& trunc) {
  params.validate();
  params.require_carrier_resonance("build_carrier_rwa_interaction");
  const TripartiteDims dims(trunc);
  const double e2 = params.eta * params.eta;

  Eigen::MatrixXcd vib = Eigen::MatrixXcd::Zero(dims.vib_dim(), dims.vib_dim());
  for (int m = 0; m <= dims.n_vib; ++m)
    vib(m, m) = 1.0 - e2 * (1.0 + 2.0 * m) / 2.0;
  const Eigen::MatrixXcd b = annihilation(dims.n_field).matrix;
  TripartiteOperator h{
      embed(spin::lowering(), vib, b.adjoint()) + embed(spin::raising(), vib, b),
      dims};

  for (int s1 = 0; s1 < 2; ++s1)
    for (int m1 = 0; m1 <= dims.n_vib; ++m1)
      for (int n1 = 0; n1 <= dims.n_field; ++n1)
        for (int s2 = 0; s2 < 2; ++s2)
          for (int m2 = 0; m2 <= dims.n_vib; ++m2)
            for (int n2 = 0; n2 <= dims.n_field; ++n2) {
              if (m1 == m2 && n1 + s1 == n2 + s2) continue;
              if (h.matrix(dims.index(s1, m1, n1), dims.index(s2, m2, n2)) != 0.0)
                throw NumericalIntegrityError(
                    "build_carrier_rwa_interaction: coupling leaves a "
                    "conserved sector");
            }
  return h;
}

namespace detail {

inline Eigen::MatrixXcd kron2(const Eigen::Matrix2cd& s,
                              const Eigen::MatrixXcd& vib) {
  const auto d = vib.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      out.block(s1 * d, s2 * d, d, d) = s(s1, s2) * vib;
  return out;
}

} // namespace detail

/// Red sideband i Omega (sigma_+ a - sigma_- a^dagger) on spin (x) vibration.
inline BipartiteOperator build_red_sideband(double rabi, int n_vib) {
  if (!(rabi > 0.0))
    throw ContractViolation("build_red_sideband: rabi frequency must be > 0");
  const Eigen::MatrixXcd a = annihilation(n_vib).matrix;
  const cdouble i_rabi(0.0, rabi);
  return {i_rabi * (detail::kron2(spin::raising(), a) -
                    detail::kron2(spin::lowering(), a.adjoint())),
          n_vib};
}

/// Blue sideband i Omega (sigma_+ a^dagger - sigma_- a).
inline BipartiteOperator build_blue_sideband(double rabi, int n_vib) {
  if (!(rabi > 0.0))
    throw ContractViolation("build_blue_sideband: rabi frequency must be > 0");
  const Eigen::MatrixXcd a = annihilation(n_vib).matrix;
  const cdouble i_rabi(0.0, rabi);
  return {i_rabi * (detail::kron2(spin::raising(), a.adjoint()) -
                    detail::kron2(spin::lowering(), a)),
          n_vib};
}

} // namespace iontrap
