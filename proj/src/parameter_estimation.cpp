#include "qkdrate/parameter_estimation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace qkd {

double xi_bound(double eps_pe, int chi, double m) {
  if (!(eps_pe > 0.0 && eps_pe <= 1.0)) {
    throw std::domain_error("eps_pe outside (0, 1]");
  }
  if (chi < 2) throw std::domain_error("POVM outcome count must be >= 2");
  if (!(m > 0.0)) throw std::domain_error("sample count must be positive");
  return std::sqrt((std::log(1.0 / eps_pe) + chi * std::log(m + 1.0)) / (8.0 * m));
}

int n_pe_parameters(const ProtocolSpec& protocol) {
  protocol.validate();
  return protocol.family == Family::TwoBases ? 2 : protocol.dimension + 1;
}

double scheme_xi(const ProtocolSpec& protocol, double eps_pe, double m) {
  protocol.validate();
  if (protocol.pe == PeScheme::Cpovm) {
    // The symmetrized state carries a single parameter, so the common POVM
    // needs only two outcomes regardless of protocol and dimension.
    return xi_bound(eps_pe, 2, m);
  }
  if (protocol.family == Family::DPlusOneBases && protocol.dimension > 2) {
    throw std::invalid_argument(
        "IPOVM parameter estimation is undefined for (d+1)-bases with d > 2; use CPOVM");
  }
  const int k = n_pe_parameters(protocol);
  return xi_bound(eps_pe / k, 2, m / k);
}

double q_max(const ProtocolSpec& protocol) {
  protocol.validate();
  if (protocol.family == Family::TwoBases) return 0.5;
  return (protocol.dimension - 1.0) / protocol.dimension;
}

PeOutcome worst_case_q(double q_err, double xi, const ProtocolSpec& protocol) {
  if (xi < 0.0) throw std::domain_error("deviation must be non-negative");
  const double boundary = q_max(protocol);
  if (!(q_err >= 0.0 && q_err <= boundary)) {
    throw std::domain_error("measured error rate outside [0, q_max]");
  }
  PeOutcome out;
  out.xi = xi;
  if (q_err + xi >= boundary) {
    out.q_eff = boundary;
    out.clamped = true;
  } else {
    out.q_eff = q_err + xi;
  }
  return out;
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions must have the same length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw std::invalid_argument("negative probability");
    }
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw std::invalid_argument("support mismatch: q vanishes where p > 0");
    }
    sum += p[i] * std::log2(p[i] / q[i]);
  }
  return sum;
}

PeSimResult simulate_pe_bound(const std::vector<double>& true_dist, int m,
                              double eps_pe, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (m < 1) throw std::invalid_argument("sample size must be >= 1");
  if (true_dist.size() < 2) throw std::invalid_argument("need at least 2 outcomes");
  double total = 0.0;
  for (double p : true_dist) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution must sum to 1");
  }

  const int chi = static_cast<int>(true_dist.size());
  const double xi = xi_bound(eps_pe, chi, static_cast<double>(m));

  // Cumulative distribution for inversion sampling; the generator is pinned
  // to mt19937_64 so a seed reproduces the violation rate everywhere.
  std::vector<double> cdf(true_dist.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < true_dist.size(); ++i) {
    acc += true_dist[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  std::mt19937_64 rng(seed);
  std::vector<int> counts(true_dist.size());
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < m; ++i) {
      const double u =
          static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0, 1)
      std::size_t k = 0;
      while (k + 1 < cdf.size() && u >= cdf[k]) ++k;
      ++counts[k];
    }
    double half_l1 = 0.0;
    for (std::size_t i = 0; i < true_dist.size(); ++i) {
      half_l1 += std::abs(static_cast<double>(counts[i]) / m - true_dist[i]);
    }
    half_l1 *= 0.5;
    if (half_l1 > xi) ++violations;
  }
  return {static_cast<double>(violations) / trials, xi};
}

}  // namespace qkd
