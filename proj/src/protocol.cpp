#include "qkdrate/protocol.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qkd {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

ProtocolSpec ProtocolSpec::bb84(PeScheme pe) {
  return ProtocolSpec{Family::TwoBases, 2, pe};
}

ProtocolSpec ProtocolSpec::six_state(PeScheme pe) {
  return ProtocolSpec{Family::DPlusOneBases, 2, pe};
}

ProtocolSpec ProtocolSpec::d_bases(int dimension, PeScheme pe) {
  return ProtocolSpec{Family::DPlusOneBases, dimension, pe};
}

void ProtocolSpec::validate() const {
  if (dimension < 2) throw std::invalid_argument("protocol dimension must be >= 2");
  if (!is_prime(dimension)) {
    throw std::invalid_argument("protocol dimension must be prime; complete "
                                "mutually unbiased bases exist for primes");
  }
  if (family == Family::TwoBases && dimension != 2) {
    throw std::invalid_argument("the 2-bases protocol is qubit-only (d = 2)");
  }
}

std::string ProtocolSpec::name() const {
  if (family == Family::TwoBases) return "bb84";
  if (dimension == 2) return "six-state";
  return "d-bases(d=" + std::to_string(dimension) + ")";
}

ChannelModel ChannelModel::symmetric(int dimension, double q_err) {
  if (dimension < 2) throw std::invalid_argument("channel dimension must be >= 2");
  if (q_err < 0.0 || q_err >= 1.0) throw std::invalid_argument("error rate outside [0, 1)");
  ChannelModel c;
  c.dimension = dimension;
  c.q_err = q_err;
  c.beta0 = 1.0 - q_err;
  c.beta1 = q_err / (dimension - 1);
  const double d = dimension;
  c.lambda.assign(static_cast<std::size_t>(dimension) * dimension, c.beta1 / d);
  c.lambda[0] = 1.0 - (d + 1.0) / d * q_err;
  c.validate();
  return c;
}

ChannelModel ChannelModel::bb84(double q_err, double u, double v) {
  if (q_err < 0.0 || q_err >= 1.0) throw std::invalid_argument("error rate outside [0, 1)");
  if (std::abs((1.0 - q_err) * u + q_err * v - q_err) > 1e-12) {
    throw std::invalid_argument("BB84 parameters violate (1-Q)u + Qv = Q");
  }
  ChannelModel c;
  c.dimension = 2;
  c.q_err = q_err;
  c.u = u;
  c.v = v;
  c.beta0 = 1.0 - q_err;
  c.beta1 = q_err;
  c.lambda = {(1.0 - q_err) * (1.0 - u), (1.0 - q_err) * u, q_err * (1.0 - v),
              q_err * v};
  c.validate();
  return c;
}

ChannelModel ChannelModel::bb84_worst_case(double q_err) {
  return bb84(q_err, q_err, q_err);
}

double ChannelModel::error_z() const { return lambda.at(2) + lambda.at(3); }

double ChannelModel::error_x() const { return lambda.at(1) + lambda.at(3); }

void ChannelModel::validate() const {
  const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("Bell-diagonal coefficients must sum to 1");
  }
  for (double l : lambda) {
    if (l < -1e-15) throw std::invalid_argument("negative Bell-diagonal coefficient");
  }
}

}  // namespace qkd
