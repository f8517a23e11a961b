#pragma once

#include <string>
#include <vector>

namespace qkd {

/// Protocol family: asymmetric 2-bases (BB84-like, qubits only) or the
/// generalized (d+1)-bases family (six-state protocol at d = 2).
enum class Family { TwoBases, DPlusOneBases };

/// Parameter-estimation scheme: one two-outcome POVM per estimated
/// parameter (IPOVM) or a single common POVM for all of them (CPOVM).
enum class PeScheme { Ipovm, Cpovm };

struct ProtocolSpec {
  Family family = Family::TwoBases;
  int dimension = 2;
  PeScheme pe = PeScheme::Cpovm;

  static ProtocolSpec bb84(PeScheme pe = PeScheme::Cpovm);
  static ProtocolSpec six_state(PeScheme pe = PeScheme::Cpovm);
  static ProtocolSpec d_bases(int dimension, PeScheme pe = PeScheme::Cpovm);

  /// Throws std::invalid_argument unless the dimension is a prime >= 2
  /// and the 2-bases family is used with d = 2.
  void validate() const;

  std::string name() const;
};

bool is_prime(int n);

/// Bell-diagonal channel description. The d^2 coefficients lambda are stored
/// row-major as lambda[j*d + k].
struct ChannelModel {
  double q_err = 0.0;
  int dimension = 2;
  std::vector<double> lambda;
  double beta0 = 1.0;
  double beta1 = 0.0;
  double u = 0.0;  // BB84 free parameters, unused for d > 2
  double v = 0.0;

  /// Symmetrized d-dimensional channel: beta0 = 1 - Q, beta1 = Q/(d-1),
  /// lambda_00 = 1 - (d+1)Q/d and all other coefficients beta1/d.
  static ChannelModel symmetric(int dimension, double q_err);

  /// BB84 one-parameter family lambda_00 = (1-Q)(1-u), lambda_01 = (1-Q)u,
  /// lambda_10 = Q(1-v), lambda_11 = Qv subject to (1-Q)u + Qv = Q.
  static ChannelModel bb84(double q_err, double u, double v);

  /// BB84 at Eve's optimum u = v = Q.
  static ChannelModel bb84_worst_case(double q_err);

  double error_z() const;  // lambda_10 + lambda_11 (d = 2)
  double error_x() const;  // lambda_01 + lambda_11 (d = 2)

  /// Checks normalization (1e-12) and non-negativity of the coefficients.
  void validate() const;
};

}  // namespace qkd
