#pragma once

#include <Eigen/Dense>

namespace qkd {

/// Eigendecomposition of a real symmetric matrix, eigenvalues sorted
/// descending, eigenvectors in the matching column order.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Cyclic Jacobi eigensolver for real symmetric matrices of dimension <= 64.
/// Iterates full sweeps until the off-diagonal Frobenius norm falls below
/// 1e-13 relative to the matrix norm; throws std::runtime_error if 100
/// sweeps do not converge and std::invalid_argument for non-symmetric input.
SymmetricEigen symmetric_eig(const Eigen::MatrixXd& m);

/// Trace norm ||M||_1 = sum |eigenvalues| for symmetric M.
double trace_norm(const Eigen::MatrixXd& m);

/// Eve's conditional states for BB84, expressed in her 4-dimensional
/// computational basis. Both states are unit trace and appear with
/// probability 1/2.
struct EnsembleBB84 {
  Eigen::Matrix4d rho0;
  Eigen::Matrix4d rho1;
  double prior = 0.5;
};

/// Builds rho_E^0, rho_E^1 from the one-parameter Bell-diagonal family.
/// Requires (1-Q)u + Qv = Q within 1e-12 and non-negative coefficients.
EnsembleBB84 build_eve_states_bb84(double q_err, double u, double v);

/// Helstrom bound for two equiprobable states:
/// p = (1 + ||rho0 - rho1||_1 / 2) / 2.
double helstrom_pguess(const EnsembleBB84& ensemble);

struct VMaximum {
  double v_star = 0.0;
  double f_max = 0.0;
};

/// Maximizes f(v) = 2 sqrt((1-v) Q [1 + (v-2) Q]) + 2 sqrt((1-v) v Q^2)
/// over v in [0, 1] by golden-section search to 1e-9 in v. The maximizer
/// is Eve's best choice on the constraint line and sits at v = Q.
VMaximum maximize_f_over_v(double q_err);

/// Gram matrix of the d pyramid states: unit diagonal, off-diagonal
/// 1 - beta1/beta0 with beta0 = 1 - Q, beta1 = Q/(d-1).
/// Requires prime d >= 2 and 0 <= Q < (d-1)/d.
Eigen::MatrixXd pyramid_gram(int d, double q_err);

/// Square-root-measurement guessing probability computed numerically:
/// realizes the pyramid states from the Gram matrix, forms the inverse
/// square root of d * rho^(=) on its nonzero eigenspace, and returns
/// Q + (1-Q) eta0 with eta0 = |<e_xx|E_xx>|^2.
double srm_pguess_numeric(int d, double q_err);

struct SrmEta {
  double eta0 = 0.0;
  double eta1 = 0.0;
};

/// Closed-form SRM overlaps from r0 = 1 - (d-1)/d * beta1/beta0 and
/// r1 = beta1 / (d beta0):
///   sqrt(eta0) = (sqrt(r0) + (d-1) sqrt(r1)) / sqrt(d)
///   sqrt(eta1) = (sqrt(r0) - sqrt(r1)) / sqrt(d)
/// The sign in eta1 is fixed by the completeness identity
/// eta0 + (d-1) eta1 = 1.
SrmEta srm_eta_closed(int d, double q_err);

}  // namespace qkd
