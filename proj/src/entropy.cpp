#include "qkdrate/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace qkd {
namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy argument outside [0, 1]");
  }
  return -xlog2x(x) - xlog2x(1.0 - x);
}

double d_ary_entropy(double p, int d) {
  if (d < 2) throw std::domain_error("d_ary_entropy requires d >= 2");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("d_ary_entropy argument outside [0, 1]");
  }
  const double spread = p > 0.0 ? -p * std::log2(p / (d - 1)) : 0.0;
  return spread - xlog2x(1.0 - p);
}

double vn_entropy_bb84(double q_err) { return 1.0 - binary_entropy(q_err); }

double vn_entropy_six_state(double q_err) {
  if (q_err == 1.0) throw std::domain_error("six-state entropy undefined at Q = 1");
  const double arg = (1.0 - 1.5 * q_err) / (1.0 - q_err);
  if (!(arg >= 0.0 && arg <= 1.0)) {
    throw std::domain_error("six-state entropy argument outside [0, 1]; requires Q <= 2/3");
  }
  return (1.0 - q_err) * (1.0 - binary_entropy(arg));
}

double vn_entropy_ddim(int d, double q_err) {
  if (d < 2) throw std::domain_error("vn_entropy_ddim requires d >= 2");
  if (q_err == 1.0) throw std::domain_error("entropy undefined at Q = 1");
  const double arg = 1.0 - (1.0 - (d + 1.0) / d * q_err) / (1.0 - q_err);
  if (!(arg >= 0.0 && arg <= 1.0)) {
    throw std::domain_error("d-dimensional entropy argument outside [0, 1]; requires Q <= d/(d+1)");
  }
  return (1.0 - q_err) * (std::log2(static_cast<double>(d)) - d_ary_entropy(arg, d));
}

EntropyValue vn_entropy(const ProtocolSpec& protocol, double q_err) {
  protocol.validate();
  double s = 0.0;
  if (protocol.family == Family::TwoBases) {
    s = vn_entropy_bb84(q_err);
  } else if (protocol.dimension == 2) {
    s = vn_entropy_six_state(q_err);
  } else {
    s = vn_entropy_ddim(protocol.dimension, q_err);
  }
  if (s < 0.0) return {0.0, true};
  return {s, false};
}

double pguess_bb84(double q_err) {
  const double radicand = (1.0 - q_err) * q_err;
  if (radicand < 0.0) throw std::domain_error("pguess_bb84 requires Q in [0, 1]");
  return 0.5 * (1.0 + 2.0 * std::sqrt(radicand));
}

double pguess_six_state(double q_err) {
  const double radicand = q_err * (2.0 - 3.0 * q_err);
  if (radicand < 0.0) throw std::domain_error("pguess_six_state requires Q in [0, 2/3]");
  return 0.5 * (1.0 + std::sqrt(radicand) + q_err);
}

double pguess_dplus1(int d, double q_err) {
  if (d < 2) throw std::domain_error("pguess_dplus1 requires d >= 2");
  const double dd = d;
  const double radicand = (dd * q_err - (dd + 1.0) * q_err * q_err) /
                          ((dd - 1.0) * dd * dd * (1.0 - q_err) * (1.0 - q_err));
  if (radicand < 0.0) {
    throw std::domain_error("pguess_dplus1 requires Q in [0, d/(d+1)]");
  }
  const double bracket = 1.0 - (dd - 2.0) * q_err / (dd * (q_err - 1.0)) +
                         2.0 * (dd - 1.0) * std::sqrt(radicand);
  return q_err + (1.0 - q_err) / dd * bracket;
}

double pguess(const ProtocolSpec& protocol, double q_err) {
  protocol.validate();
  if (q_err < 0.0 || q_err >= 1.0) throw std::domain_error("error rate outside [0, 1)");
  if (protocol.family == Family::TwoBases) return pguess_bb84(q_err);
  return pguess_dplus1(protocol.dimension, q_err);
}

double min_entropy_from_pguess(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("guessing probability outside (0, 1]");
  }
  return -std::log2(p);
}

double leak_ec(const ProtocolSpec& protocol, double q_err, double factor) {
  protocol.validate();
  if (factor <= 0.0) throw std::domain_error("leakage factor must be positive");
  return factor * d_ary_entropy(q_err, protocol.dimension);
}

}  // namespace qkd
