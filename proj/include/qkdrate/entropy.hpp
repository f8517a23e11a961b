#pragma once

#include "qkdrate/protocol.hpp"

namespace qkd {

/// Binary entropy h(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 := 0.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double x);

/// d-ary entropy h_d(p) = -p log2(p/(d-1)) - (1-p) log2(1-p).
/// Reduces to binary_entropy at d = 2.
double d_ary_entropy(double p, int d);

/// Conditional von Neumann entropy of the key given Eve, for one signal.
struct EntropyValue {
  double value = 0.0;
  bool clamped = false;  // true when a negative result was clamped to 0
};

double vn_entropy_bb84(double q_err);
double vn_entropy_six_state(double q_err);
double vn_entropy_ddim(int d, double q_err);

/// Dispatches on the protocol: 1 - h(Q) for 2-bases, the six-state closed
/// form at d = 2, the d-dimensional closed form otherwise. Valid for
/// Q <= d/(d+1) in the (d+1)-bases family; outside that range the entropy
/// argument leaves [0,1] and a std::domain_error is thrown.
EntropyValue vn_entropy(const ProtocolSpec& protocol, double q_err);

/// Eve's optimal guessing probabilities.
double pguess_bb84(double q_err);                 // (1 + 2 sqrt(Q(1-Q))) / 2
double pguess_six_state(double q_err);            // (1 + sqrt(Q(2-3Q)) + Q) / 2
double pguess_dplus1(int d, double q_err);        // general-d closed form
double pguess(const ProtocolSpec& protocol, double q_err);

/// Min-entropy -log2 p for p in (0, 1].
double min_entropy_from_pguess(double p);

/// Error-correction leakage factor * h_d(Q). The 1.2 default matches a
/// reconciliation efficiency at eps_EC = 1e-10.
double leak_ec(const ProtocolSpec& protocol, double q_err, double factor = 1.2);

}  // namespace qkd
