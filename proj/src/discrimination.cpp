#include "qkdrate/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qkdrate/protocol.hpp"

namespace qkd {
namespace {

constexpr int kMaxDim = 64;
constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-13;

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (int p = 0; p < a.rows(); ++p) {
    for (int q = p + 1; q < a.cols(); ++q) sum += 2.0 * a(p, q) * a(p, q);
  }
  return std::sqrt(sum);
}

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (m.rows() < 1 || m.rows() > kMaxDim) {
    throw std::invalid_argument("matrix dimension must be in [1, 64]");
  }
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("matrix is not symmetric");
  }
}

}  // namespace

SymmetricEigen symmetric_eig(const Eigen::MatrixXd& m) {
  check_symmetric(m);
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double tol = kOffDiagTol * std::max(1.0, a.norm());

  int sweep = 0;
  while (off_diagonal_norm(a) > tol) {
    if (++sweep > kMaxSweeps) {
      throw std::runtime_error("Jacobi eigensolver failed to converge in 100 sweeps");
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int i, int j) { return a(i, i) > a(j, j); });
  for (int i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

double trace_norm(const Eigen::MatrixXd& m) {
  return symmetric_eig(m).values.cwiseAbs().sum();
}

EnsembleBB84 build_eve_states_bb84(double q_err, double u, double v) {
  const ChannelModel channel = ChannelModel::bb84(q_err, u, v);
  const double l00 = channel.lambda[0];
  const double l01 = channel.lambda[1];
  const double l10 = channel.lambda[2];
  const double l11 = channel.lambda[3];
  const double a = std::sqrt(std::max(0.0, l00 * l01));
  const double b = std::sqrt(std::max(0.0, l10 * l11));

  EnsembleBB84 e;
  e.rho0 << l00, a, 0, 0,
            a, l01, 0, 0,
            0, 0, l10, b,
            0, 0, b, l11;
  e.rho1 << l00, -a, 0, 0,
            -a, l01, 0, 0,
            0, 0, l10, -b,
            0, 0, -b, l11;
  return e;
}

double helstrom_pguess(const EnsembleBB84& ensemble) {
  const Eigen::MatrixXd diff = ensemble.rho0 - ensemble.rho1;
  return 0.5 * (1.0 + 0.5 * trace_norm(diff));
}

VMaximum maximize_f_over_v(double q_err) {
  if (!(q_err > 0.0 && q_err < 0.5)) {
    throw std::domain_error("maximize_f_over_v requires Q in (0, 1/2)");
  }
  const auto f = [q_err](double v) {
    const double t1 = (1.0 - v) * q_err * (1.0 + (v - 2.0) * q_err);
    const double t2 = (1.0 - v) * v * q_err * q_err;
    return 2.0 * std::sqrt(std::max(0.0, t1)) + 2.0 * std::sqrt(std::max(0.0, t2));
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-9) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  const double v_star = 0.5 * (lo + hi);
  return {v_star, f(v_star)};
}

Eigen::MatrixXd pyramid_gram(int d, double q_err) {
  if (!is_prime(d)) throw std::domain_error("pyramid_gram requires prime d >= 2");
  if (!(q_err >= 0.0 && q_err < (d - 1.0) / d)) {
    throw std::domain_error("pyramid_gram requires 0 <= Q < (d-1)/d");
  }
  const double beta0 = 1.0 - q_err;
  const double beta1 = q_err / (d - 1.0);
  const double overlap = 1.0 - beta1 / beta0;
  Eigen::MatrixXd g = Eigen::MatrixXd::Constant(d, d, overlap);
  g.diagonal().setOnes();
  return g;
}

double srm_pguess_numeric(int d, double q_err) {
  const Eigen::MatrixXd gram = pyramid_gram(d, q_err);

  // Realize the pyramid states as the columns of the symmetric square root
  // of the Gram matrix; overlaps are all that matter.
  const SymmetricEigen eg = symmetric_eig(gram);
  const double eig_scale = std::max(1.0, eg.values.cwiseAbs().maxCoeff());
  Eigen::VectorXd roots(d);
  for (int i = 0; i < d; ++i) {
    const double w = eg.values(i);
    if (w < -1e-10 * eig_scale) {
      throw std::runtime_error("pyramid Gram matrix is not positive semidefinite");
    }
    roots(i) = std::sqrt(std::max(0.0, w));
  }
  const Eigen::MatrixXd states =
      eg.vectors * roots.asDiagonal() * eg.vectors.transpose();

  // d * rho^(=) = sum_x |E_xx><E_xx| over the realized states.
  Eigen::MatrixXd d_rho = Eigen::MatrixXd::Zero(d, d);
  for (int x = 0; x < d; ++x) {
    d_rho.noalias() += states.col(x) * states.col(x).transpose();
  }

  // Inverse square root on the nonzero eigenspace; rank deficiency appears
  // only at Q = 0 where all states coincide.
  const SymmetricEigen er = symmetric_eig(d_rho);
  const double rank_tol = 1e-12 * std::max(1.0, er.values.cwiseAbs().maxCoeff());
  Eigen::VectorXd inv_roots(d);
  for (int i = 0; i < d; ++i) {
    inv_roots(i) = er.values(i) > rank_tol ? 1.0 / std::sqrt(er.values(i)) : 0.0;
  }
  const Eigen::MatrixXd inv_sqrt =
      er.vectors * inv_roots.asDiagonal() * er.vectors.transpose();

  double eta0_min = 1.0, eta0_max = 0.0, eta0_sum = 0.0;
  for (int x = 0; x < d; ++x) {
    const double overlap = states.col(x).dot(inv_sqrt * states.col(x));
    const double eta0 = overlap * overlap;
    eta0_min = std::min(eta0_min, eta0);
    eta0_max = std::max(eta0_max, eta0);
    eta0_sum += eta0;
  }
  if (eta0_max - eta0_min > 1e-9) {
    throw std::runtime_error("square-root measurement lost the pyramid symmetry");
  }
  return q_err + (1.0 - q_err) * eta0_sum / d;
}

SrmEta srm_eta_closed(int d, double q_err) {
  if (!is_prime(d)) throw std::domain_error("srm_eta_closed requires prime d >= 2");
  if (!(q_err >= 0.0 && q_err < (d - 1.0) / d)) {
    throw std::domain_error("srm_eta_closed requires 0 <= Q < (d-1)/d");
  }
  const double beta0 = 1.0 - q_err;
  const double beta1 = q_err / (d - 1.0);
  const double r0 = 1.0 - (d - 1.0) / d * beta1 / beta0;
  const double r1 = beta1 / (d * beta0);
  const double sd = std::sqrt(static_cast<double>(d));
  const double s_eta0 = (std::sqrt(r0) + (d - 1.0) * std::sqrt(r1)) / sd;
  const double s_eta1 = (std::sqrt(r0) - std::sqrt(r1)) / sd;
  return {s_eta0 * s_eta0, s_eta1 * s_eta1};
}

}  // namespace qkd
