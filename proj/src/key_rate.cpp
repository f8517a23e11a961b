#include "qkdrate/key_rate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "qkdrate/entropy.hpp"

namespace qkd {

void SecurityBudget::validate() const {
  if (!(eps_total > 0.0 && eps_ec > 0.0 && eps_pe > 0.0 && eps_pa > 0.0 &&
        eps_bar > 0.0)) {
    throw std::invalid_argument("all security-budget components must be positive");
  }
  const double sum = eps_pa + eps_ec + eps_pe + eps_bar;
  if (std::abs(sum - eps_total) > 4e-15 * eps_total) {
    throw std::invalid_argument("security-budget components do not sum to eps_total");
  }
}

SecurityBudget SecurityBudget::split(double eps_total, double eps_ec,
                                     double frac_pe, double frac_pa) {
  if (!(eps_ec > 0.0 && eps_ec < eps_total)) {
    throw std::invalid_argument("eps_ec must lie in (0, eps_total)");
  }
  if (!(frac_pe > 0.0 && frac_pa > 0.0 && frac_pe + frac_pa < 1.0)) {
    throw std::invalid_argument("budget fractions must be positive and sum below 1");
  }
  const double free_budget = eps_total - eps_ec;
  SecurityBudget b;
  b.eps_total = eps_total;
  b.eps_ec = eps_ec;
  b.eps_pe = frac_pe * free_budget;
  b.eps_pa = frac_pa * free_budget;
  b.eps_bar = free_budget - b.eps_pe - b.eps_pa;
  b.validate();
  return b;
}

Yields yields(double total, double q_key, const ProtocolSpec& protocol,
              YieldKind model) {
  protocol.validate();
  if (!(total > 0.0)) throw std::invalid_argument("signal count must be positive");
  if (!(q_key > 0.0 && q_key < 1.0)) {
    throw std::invalid_argument("key-basis probability outside (0, 1)");
  }
  const int d = protocol.dimension;
  const double p =
      protocol.family == Family::TwoBases ? 1.0 - q_key : (1.0 - q_key) / d;
  if (!(p > 0.0 && p < 1.0 / d)) {
    throw std::invalid_argument("estimation-basis probability outside (0, 1/d)");
  }
  Yields y;
  y.total = total;
  y.q_key = q_key;
  y.p_pe = p;
  y.model = model;
  y.n = total * q_key * q_key;
  const int pe_bases = protocol.family == Family::TwoBases ? 1 : d;
  y.m = model == YieldKind::Pooled ? total * p * p
                                         : total * pe_bases * p * p;
  return y;
}

double delta_qubit(double n, double eps_bar) {
  if (!(n > 0.0)) throw std::domain_error("n must be positive");
  if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw std::domain_error("eps_bar outside (0, 1)");
  return -7.0 * std::sqrt(std::log2(2.0 / eps_bar) / n);
}

double delta_ddim(double n, double eps_bar, int d) {
  if (d < 2) throw std::domain_error("dimension must be >= 2");
  if (!(n > 0.0)) throw std::domain_error("n must be positive");
  if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw std::domain_error("eps_bar outside (0, 1)");
  return -(2.0 * std::log2(static_cast<double>(d)) + 3.0) *
         std::sqrt(std::log2(2.0 / eps_bar) / n);
}

double delta_correction(double n, double eps_bar, const ProtocolSpec& protocol,
                        DeltaKind kind) {
  switch (kind) {
    case DeltaKind::Qubit:
      return delta_qubit(n, eps_bar);
    case DeltaKind::DDim:
      return delta_ddim(n, eps_bar, protocol.dimension);
    case DeltaKind::Auto:
    default:
      return protocol.dimension == 2 ? delta_qubit(n, eps_bar)
                                     : delta_ddim(n, eps_bar, protocol.dimension);
  }
}

RateBreakdown key_rate(const ProtocolSpec& protocol, double q_err, double total,
                       const SecurityBudget& budget, double q_key,
                       const RateOptions& options) {
  protocol.validate();
  budget.validate();
  if (!(q_err >= 0.0 && q_err < 1.0)) {
    throw std::domain_error("error rate outside [0, 1)");
  }
  if (!(options.pe_scale >= 0.0)) throw std::invalid_argument("pe_scale must be >= 0");

  const Yields y = yields(total, q_key, protocol, options.model);
  const double xi = scheme_xi(protocol, budget.eps_pe, y.m);
  const PeOutcome pe = worst_case_q(q_err, options.pe_scale * xi, protocol);

  RateBreakdown b;
  b.total = total;
  b.n = y.n;
  b.m = y.m;
  b.q_key = q_key;
  b.q_eff = pe.q_eff;
  b.deviation = pe.xi;
  b.clamped = pe.clamped;
  b.budget = budget;
  b.leak = leak_ec(protocol, q_err, options.leak_factor);
  b.pa_term = 2.0 / total * std::log2(2.0 * budget.eps_pa);

  if (options.bound == Bound::VonNeumann) {
    b.entropy_term = vn_entropy(protocol, pe.q_eff).value;
    b.delta = delta_correction(y.n, budget.eps_bar, protocol, options.delta);
  } else {
    b.entropy_term = min_entropy_from_pguess(pguess(protocol, pe.q_eff));
    b.delta = 0.0;  // the n-copy min-entropy bound carries no correction term
  }
  b.rate = b.recompose();
  return b;
}

namespace {

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;

  double at(int i, int points) const {
    if (points == 1) return 0.5 * (lo + hi);
    return lo + (hi - lo) * i / (points - 1);
  }
  GridAxis refined(double center, double factor, const GridAxis& bounds) const {
    const double half = 0.5 * (hi - lo) / factor;
    double nlo = center - half;
    double nhi = center + half;
    nlo = std::max(nlo, bounds.lo);
    nhi = std::min(nhi, bounds.hi);
    return {nlo, nhi};
  }
};

constexpr int kGridPoints = 15;
constexpr int kRefinePasses = 3;
constexpr double kShrink = 4.0;
constexpr double kMinFraction = 1e-3 / 3.0;

// (t1, t2) are log10 weights of (eps_pe, eps_pa) against a unit weight for
// eps_bar; fractions are floored and renormalized to keep the simplex.
std::array<double, 3> fractions_from_weights(double t1, double t2) {
  const double w1 = std::pow(10.0, t1);
  const double w2 = std::pow(10.0, t2);
  const double sum = w1 + w2 + 1.0;
  std::array<double, 3> f = {w1 / sum, w2 / sum, 1.0 / sum};
  double fsum = 0.0;
  for (double& fi : f) fsum += (fi = std::max(fi, kMinFraction));
  for (double& fi : f) fi /= fsum;
  return f;
}

}  // namespace

OptimizeResult optimize_rate(const ProtocolSpec& protocol, double q_err,
                             double total, double eps_total, double eps_ec,
                             const RateOptions& options) {
  protocol.validate();
  if (!(eps_ec > 0.0 && eps_ec < eps_total)) {
    throw std::invalid_argument("infeasible budget: need 0 < eps_ec < eps_total");
  }
  if (!(total > 0.0)) throw std::invalid_argument("signal count must be positive");

  const int d = protocol.dimension;
  // m >= 1 pins the smallest usable 1-q; the 2-bases family additionally
  // needs p = 1-q below 1/2.
  const double min_1mq =
      protocol.family == Family::TwoBases ? 1.0 / std::sqrt(total)
                                          : d / std::sqrt(total);
  const double max_1mq = protocol.family == Family::TwoBases
                             ? 0.5 * (1.0 - 1e-12)
                             : 1.0 - 1e-3;
  if (!(min_1mq < max_1mq)) {
    throw std::invalid_argument("infeasible yield: too few signals for m >= 1");
  }

  const GridAxis u_bounds{std::log(min_1mq), std::log(max_1mq)};
  const GridAxis t_bounds{-3.5, 3.5};
  GridAxis u_axis = u_bounds;
  GridAxis t1_axis = t_bounds;
  GridAxis t2_axis = t_bounds;

  bool have_best = false;
  RateBreakdown best;
  OptParams best_params;
  double best_u = 0.0, best_t1 = 0.0, best_t2 = 0.0;

  for (int pass = 0; pass <= kRefinePasses; ++pass) {
    if (pass > 0) {
      u_axis = u_axis.refined(best_u, kShrink, u_bounds);
      t1_axis = t1_axis.refined(best_t1, kShrink, t_bounds);
      t2_axis = t2_axis.refined(best_t2, kShrink, t_bounds);
    }
    for (int iu = 0; iu < kGridPoints; ++iu) {
      const double u = u_axis.at(iu, kGridPoints);
      const double q_key = 1.0 - std::exp(u);
      for (int i1 = 0; i1 < kGridPoints; ++i1) {
        const double t1 = t1_axis.at(i1, kGridPoints);
        for (int i2 = 0; i2 < kGridPoints; ++i2) {
          const double t2 = t2_axis.at(i2, kGridPoints);
          const auto f = fractions_from_weights(t1, t2);
          const SecurityBudget budget =
              SecurityBudget::split(eps_total, eps_ec, f[0], f[1]);
          const RateBreakdown candidate =
              key_rate(protocol, q_err, total, budget, q_key, options);
          if (!have_best || candidate.rate > best.rate) {
            have_best = true;
            best = candidate;
            best_params = {budget.eps_pe, budget.eps_pa, budget.eps_bar, q_key};
            best_u = u;
            best_t1 = t1;
            best_t2 = t2;
          }
        }
      }
    }
  }
  return {best, best_params};
}

Threshold find_threshold_n0(const ProtocolSpec& protocol, double q_err,
                            double eps_total, double eps_ec,
                            const RateOptions& options) {
  constexpr double kStart = 1e3;
  constexpr double kCap = 1e16;
  constexpr double kFloor = 4.0;

  const auto positive = [&](double total) {
    try {
      return optimize_rate(protocol, q_err, total, eps_total, eps_ec, options)
                 .best.rate > 0.0;
    } catch (const std::invalid_argument&) {
      return false;  // infeasible yield counts as no key
    }
  };

  double lo = kStart, hi = kStart;
  if (positive(kStart)) {
    while (lo > kFloor && positive(lo / 2.0)) lo /= 2.0;
    hi = lo;        // smallest signal count known to give a key
    lo /= 2.0;
    if (lo <= kFloor) return {hi, hi * std::log2(protocol.dimension)};
  } else {
    while (!positive(hi)) {
      hi *= 2.0;
      if (hi > kCap) {
        throw std::runtime_error("no positive key rate below N = 1e16");
      }
    }
    lo = hi / 2.0;
  }

  while (hi / lo - 1.0 > 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (positive(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, hi * std::log2(static_cast<double>(protocol.dimension))};
}

}  // namespace qkd
