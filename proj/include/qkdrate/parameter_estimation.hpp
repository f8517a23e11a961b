#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qkdrate/protocol.hpp"

namespace qkd {

/// Statistical deviation bound for estimating a POVM outcome distribution
/// from m samples:
///   xi(eps, chi, m) = sqrt((ln(1/eps) + chi * ln(m+1)) / (8m))
/// chi is the POVM outcome count. eps in (0, 1], m > 0.
double xi_bound(double eps_pe, int chi, double m);

/// Number of parameters the unsymmetrized state would require estimating:
/// one error rate per measurement basis (2 for 2-bases, d+1 otherwise).
/// IPOVM splits budget and samples this many ways; a common POVM on the
/// unsymmetrized state would need n_pe + 1 outcomes.
int n_pe_parameters(const ProtocolSpec& protocol);

/// Scheme dispatch for the symmetrized one-parameter channel:
///   IPOVM:   xi(eps/n_pe, 2, m/n_pe)  (2-bases and six-state only)
///   CPOVM:   xi(eps, 2, m)            (all protocols)
/// IPOVM is undefined for (d+1)-bases with d > 2 and throws.
double scheme_xi(const ProtocolSpec& protocol, double eps_pe, double m);

struct PeOutcome {
  double xi = 0.0;     // deviation applied to the measured error rate
  double q_eff = 0.0;  // worst-case compatible error rate
  bool clamped = false;
};

/// Largest error rate on which the entropy bounds are still non-increasing;
/// worst-case evaluation clamps there.
double q_max(const ProtocolSpec& protocol);

/// Worst case over the compatible set: q_eff = min(Q + xi, q_max).
PeOutcome worst_case_q(double q_err, double xi, const ProtocolSpec& protocol);

/// Relative entropy sum_i p_i log2(p_i / q_i) in bits. Throws on length
/// mismatch or when q vanishes on the support of p.
double relative_entropy(std::span<const double> p, std::span<const double> q);

struct PeSimResult {
  double violation_rate = 0.0;
  double xi_used = 0.0;
};

/// Draws `trials` multinomial samples of size m from true_dist with a
/// seeded mt19937_64 and counts how often the half-L1 distance between the
/// empirical and true distribution exceeds xi_bound(eps_pe, |dist|, m).
/// Deterministic for a fixed seed.
PeSimResult simulate_pe_bound(const std::vector<double>& true_dist, int m,
                              double eps_pe, int trials, std::uint64_t seed);

}  // namespace qkd
