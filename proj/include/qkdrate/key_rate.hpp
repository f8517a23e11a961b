#pragma once

#include "qkdrate/parameter_estimation.hpp"
#include "qkdrate/protocol.hpp"

namespace qkd {

/// Split of the total security parameter
/// eps_total = eps_pa + eps_ec + eps_pe + eps_bar, all parts positive.
struct SecurityBudget {
  double eps_total = 1e-9;
  double eps_ec = 1e-10;
  double eps_pe = 3e-10;
  double eps_pa = 3e-10;
  double eps_bar = 3e-10;

  /// Throws std::invalid_argument unless all parts are positive and the sum
  /// matches eps_total to 1e-15 relative.
  void validate() const;

  /// Budget with eps_pe = frac_pe and eps_pa = frac_pa of the free budget
  /// eps_total - eps_ec; eps_bar takes the exact remainder.
  static SecurityBudget split(double eps_total, double eps_ec, double frac_pe,
                              double frac_pa);
};

enum class Bound { VonNeumann, MinEntropy };

/// Estimation-sample accounting: Pooled treats m = N p^2 as the total;
/// PerBasis counts the coincidences of all d estimation bases,
/// m = d N p^2 (identical for 2-bases protocols).
enum class YieldKind { Pooled, PerBasis };

/// Finite-size correction family: -7 sqrt(log2(2/eps_bar)/n) for the qubit
/// protocols, -(2 log2 d + 3) sqrt(log2(2/eps_bar)/n) for the d-dimensional
/// one. Auto picks Qubit at d = 2 and DDim above.
enum class DeltaKind { Auto, Qubit, DDim };

struct Yields {
  double total = 0.0;   // N
  double q_key = 0.0;   // key-basis probability per party
  double p_pe = 0.0;    // per-basis estimation probability
  double n = 0.0;       // N q^2 signals kept for the key
  double m = 0.0;       // estimation signals
  YieldKind model = YieldKind::PerBasis;

  double sifted_loss() const { return total - n - m; }  // n'
};

/// Signal accounting for one run. q in (0,1); the induced p = (1-q)/d
/// ((1-q) for 2-bases) must stay below 1/d.
Yields yields(double total, double q_key, const ProtocolSpec& protocol,
              YieldKind model);

double delta_qubit(double n, double eps_bar);
double delta_ddim(double n, double eps_bar, int d);
double delta_correction(double n, double eps_bar, const ProtocolSpec& protocol,
                        DeltaKind kind = DeltaKind::Auto);

struct RateOptions {
  Bound bound = Bound::VonNeumann;
  YieldKind model = YieldKind::PerBasis;
  DeltaKind delta = DeltaKind::Auto;
  /// Worst-case deviation applied to Q in units of the xi bound:
  /// q_eff = Q + pe_scale * scheme_xi.
  double pe_scale = 4.0;
  double leak_factor = 1.2;
};

/// One fully audited rate evaluation. rate recomposes from its parts:
/// rate = (n/N)(entropy_term + delta - leak) + pa_term.
struct RateBreakdown {
  double rate = 0.0;
  double total = 0.0;  // N
  double n = 0.0;
  double m = 0.0;
  double q_key = 0.0;
  double entropy_term = 0.0;
  double delta = 0.0;  // <= 0; zero on the min-entropy path
  double leak = 0.0;
  double pa_term = 0.0;
  double q_eff = 0.0;
  double deviation = 0.0;  // pe_scale * xi
  bool clamped = false;    // q_eff hit the domain boundary
  SecurityBudget budget;

  double recompose() const {
    return n / total * (entropy_term + delta - leak) + pa_term;
  }
};

/// Secret-key rate for fixed (q, budget). Entropy is evaluated at the
/// worst-case q_eff, leakage at the measured Q.
RateBreakdown key_rate(const ProtocolSpec& protocol, double q_err, double total,
                       const SecurityBudget& budget, double q_key,
                       const RateOptions& options);

struct OptParams {
  double eps_pe = 0.0;
  double eps_pa = 0.0;
  double eps_bar = 0.0;
  double q_key = 0.0;
};

struct OptimizeResult {
  RateBreakdown best;
  OptParams params;
};

/// Deterministic maximization over (eps_pe, eps_pa, eps_bar) on the simplex
/// eps_total - eps_ec and over q: 15-point grids per dimension (log-space
/// weight fractions for the budget, log(1-q) for q) with 3 refinement
/// passes shrinking each range 4x around the incumbent. Ties resolve to the
/// earliest grid point, so results are bit-reproducible.
OptimizeResult optimize_rate(const ProtocolSpec& protocol, double q_err,
                             double total, double eps_total, double eps_ec,
                             const RateOptions& options);

struct Threshold {
  double n0 = 0.0;
  double n0_scaled = 0.0;  // n0 * log2(d)
};

/// Smallest N with positive optimized rate: doubling search from N = 1e3
/// (halving downward if already positive) followed by bisection on log N to
/// 1e-3 relative width. Throws std::runtime_error if no positive rate is
/// found below N = 1e16.
Threshold find_threshold_n0(const ProtocolSpec& protocol, double q_err,
                            double eps_total, double eps_ec,
                            const RateOptions& options);

}  // namespace qkd
