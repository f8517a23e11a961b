// qkdrate: finite-key secret-key rates, thresholds and verification runs
// for BB84, six-state and (d+1)-bases protocols.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qkdrate/discrimination.hpp"
#include "qkdrate/entropy.hpp"
#include "qkdrate/key_rate.hpp"
#include "qkdrate/parameter_estimation.hpp"
#include "qkdrate/report.hpp"

namespace {

using namespace qkd;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;

struct CommonConfig {
  std::string protocol = "bb84";
  int dimension = 2;
  std::string bound = "vn";
  std::string pe = "cpovm";
  std::string yield = "per-basis";
  double eps = 1e-9;
  double eps_ec = 1e-10;
  double pe_scale = 4.0;
  double leak_factor = 1.2;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 1;
};

void add_common_flags(CLI::App* cmd, CommonConfig* cfg) {
  cmd->add_option("--protocol", cfg->protocol, "Protocol: bb84, six-state or d-bases")
      ->check(CLI::IsMember({"bb84", "six-state", "d-bases"}));
  cmd->add_option("--dimension", cfg->dimension, "Qudit dimension (prime), d-bases only");
  cmd->add_option("--bound", cfg->bound, "Entropy bound: vn or min")
      ->check(CLI::IsMember({"vn", "min"}));
  cmd->add_option("--pe", cfg->pe, "Parameter estimation scheme: ipovm or cpovm")
      ->check(CLI::IsMember({"ipovm", "cpovm"}));
  cmd->add_option("--yield", cfg->yield, "Estimation yield model: paper or per-basis")
      ->check(CLI::IsMember({"paper", "per-basis"}));
  cmd->add_option("--eps", cfg->eps, "Total security parameter (default 1e-9)");
  cmd->add_option("--eps-ec", cfg->eps_ec, "Error-correction failure budget (default 1e-10)");
  cmd->add_option("--pe-scale", cfg->pe_scale,
                  "Worst-case deviation in units of the xi bound (default 4)");
  cmd->add_option("--leak-factor", cfg->leak_factor,
                  "Error-correction leakage factor (default 1.2)");
  cmd->add_option("--seed", cfg->seed, "Seed for Monte Carlo runs");
  cmd->add_option("--out", cfg->out, "Output path (default stdout)");
  cmd->add_option("--format", cfg->format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

ProtocolSpec protocol_from(const CommonConfig& cfg) {
  const PeScheme pe = cfg.pe == "ipovm" ? PeScheme::Ipovm : PeScheme::Cpovm;
  ProtocolSpec proto;
  if (cfg.protocol == "bb84") {
    if (cfg.dimension != 2) throw CLI::ValidationError("bb84 requires --dimension 2");
    proto = ProtocolSpec::bb84(pe);
  } else if (cfg.protocol == "six-state") {
    if (cfg.dimension != 2) throw CLI::ValidationError("six-state requires --dimension 2");
    proto = ProtocolSpec::six_state(pe);
  } else {
    proto = ProtocolSpec::d_bases(cfg.dimension, pe);
  }
  proto.validate();
  return proto;
}

RateOptions options_from(const CommonConfig& cfg) {
  RateOptions opt;
  opt.bound = cfg.bound == "min" ? Bound::MinEntropy : Bound::VonNeumann;
  opt.model = cfg.yield == "paper" ? YieldKind::Pooled : YieldKind::PerBasis;
  // the d-bases protocol always runs the d-dimensional formula set, also at
  // d = 2; bb84/six-state keep the qubit correction term
  opt.delta = cfg.protocol == "d-bases" ? DeltaKind::DDim : DeltaKind::Auto;
  opt.pe_scale = cfg.pe_scale;
  opt.leak_factor = cfg.leak_factor;
  return opt;
}

class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw CLI::ValidationError("cannot open output path " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

template <typename Row>
void emit(const CommonConfig& cfg, const std::string& command,
          const std::vector<Row>& rows) {
  OutputStream out(cfg.out);
  if (cfg.format == "json") {
    write_json(out.get(), command, rows);
  } else {
    write_csv(out.get(), rows);
  }
}

// ---- rate -------------------------------------------------------------------

int run_rate(const CommonConfig& cfg, double q_err, double signals) {
  if (!(signals > 0.0)) throw CLI::ValidationError("--signals must be positive");
  if (!(q_err >= 0.0 && q_err < 1.0)) throw CLI::ValidationError("--qber outside [0, 1)");
  const auto res = optimize_rate(protocol_from(cfg), q_err, signals, cfg.eps,
                                 cfg.eps_ec, options_from(cfg));
  emit(cfg, "rate", std::vector<RateBreakdown>{res.best});
  return kExitOk;
}

// ---- threshold ----------------------------------------------------------------

int run_threshold(const CommonConfig& cfg, double q_min, double q_max, int steps) {
  if (steps < 1 || q_min <= 0.0 || q_max < q_min) {
    throw CLI::ValidationError("invalid threshold grid");
  }
  const auto proto = protocol_from(cfg);
  const auto opt = options_from(cfg);
  std::vector<ThresholdRow> rows;
  for (int i = 0; i < steps; ++i) {
    const double q = steps == 1 ? q_min : q_min + (q_max - q_min) * i / (steps - 1);
    const auto th = find_threshold_n0(proto, q, cfg.eps, cfg.eps_ec, opt);
    rows.push_back({q, th.n0, th.n0_scaled});
  }
  emit(cfg, "threshold", rows);
  return kExitOk;
}

// ---- sweep ---------------------------------------------------------------------

int run_sweep(const CommonConfig& cfg, double q_err, double n_min, double n_max,
              int points) {
  if (points < 2 || n_min <= 0.0 || n_max <= n_min) {
    throw CLI::ValidationError("invalid sweep grid");
  }
  const auto proto = protocol_from(cfg);
  const auto opt = options_from(cfg);
  std::vector<SweepRow> rows;
  for (int i = 0; i < points; ++i) {
    const double n_total =
        n_min * std::pow(n_max / n_min, static_cast<double>(i) / (points - 1));
    const auto res = optimize_rate(proto, q_err, n_total, cfg.eps, cfg.eps_ec, opt);
    rows.push_back({n_total, res.best.rate, std::max(res.best.rate, 0.0)});
  }
  emit(cfg, "sweep", rows);
  return kExitOk;
}

// ---- compare-pe ------------------------------------------------------------------

int run_compare_pe(const CommonConfig& cfg, double q_err, double n_min,
                   double n_max, int points) {
  if (points < 1 || n_min <= 0.0 || n_max < n_min) {
    throw CLI::ValidationError("invalid comparison grid");
  }
  auto cfg_c = cfg;
  cfg_c.pe = "cpovm";
  auto cfg_i = cfg;
  cfg_i.pe = "ipovm";
  const auto proto_c = protocol_from(cfg_c);
  const auto proto_i = protocol_from(cfg_i);
  const auto opt = options_from(cfg);
  std::vector<ComparePeRow> rows;
  for (int i = 0; i < points; ++i) {
    const double n_total =
        points == 1 ? n_min
                    : n_min * std::pow(n_max / n_min,
                                       static_cast<double>(i) / (points - 1));
    const double rc =
        optimize_rate(proto_c, q_err, n_total, cfg.eps, cfg.eps_ec, opt).best.rate;
    const double ri =
        optimize_rate(proto_i, q_err, n_total, cfg.eps, cfg.eps_ec, opt).best.rate;
    rows.push_back({n_total, ri, rc, 100.0 * (rc - ri) / std::abs(ri)});
  }
  emit(cfg, "compare-pe", rows);
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------------

struct VerifyCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return residual <= tolerance; }
};

int run_verify(const CommonConfig& cfg) {
  std::vector<VerifyCheck> checks;

  {
    double max_err = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double q = 0.3 * i / 400.0;
      max_err = std::max(max_err,
                         std::abs(pguess_dplus1(2, q) - pguess_six_state(q)));
    }
    checks.push_back({"d2-reduction", max_err, 1e-12});
  }
  {
    double max_err = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double q = 0.001 + (0.25 - 0.001) * i / 99.0;
      max_err = std::max(max_err, std::abs(helstrom_pguess(build_eve_states_bb84(
                                               q, q, q)) -
                                           pguess_bb84(q)));
    }
    checks.push_back({"helstrom-oracle", max_err, 1e-10});
  }
  {
    double max_err = 0.0;
    for (double q : {0.01, 0.05, 0.1, 0.25}) {
      max_err = std::max(max_err, std::abs(maximize_f_over_v(q).v_star - q));
    }
    checks.push_back({"worst-case-v", max_err, 1e-6});
  }
  {
    double max_err = 0.0;
    for (int d : {2, 3, 5, 7, 11, 13, 17}) {
      for (int i = 0; i < 15; ++i) {
        const double q = 0.01 + (0.15 - 0.01) * i / 14.0;
        max_err = std::max(
            max_err, std::abs(srm_pguess_numeric(d, q) - pguess_dplus1(d, q)));
      }
    }
    checks.push_back({"srm-oracle", max_err, 1e-9});
  }
  {
    double max_err = 0.0;
    for (int d : {2, 3, 5, 7, 11, 13, 17}) {
      for (double q : {0.01, 0.05, 0.1, 0.2}) {
        const auto eta = srm_eta_closed(d, q);
        max_err = std::max(max_err, std::abs(eta.eta0 + (d - 1) * eta.eta1 - 1.0));
      }
    }
    checks.push_back({"srm-eta-completeness", max_err, 1e-12});
  }
  {
    double worst = 0.0;  // violation minus budget, positive means failure
    for (double eps : {0.5, 0.1, 0.01}) {
      for (int m : {50, 500}) {
        const auto res = simulate_pe_bound({0.95, 0.05}, m, eps, 10000, cfg.seed);
        worst = std::max(worst, res.violation_rate - eps);
      }
    }
    checks.push_back({"pe-monte-carlo", worst, 0.0});
  }

  bool all = true;
  for (const auto& c : checks) {
    std::printf("[%s] %-22s residual %.3e tolerance %.1e\n",
                c.pass() ? "PASS" : "FAIL", c.name.c_str(), c.residual,
                c.tolerance);
    all = all && c.pass();
  }
  return all ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-key QKD rate engine"};
  app.require_subcommand(1);

  CommonConfig cfg;
  double q_err = 0.05;
  double signals = 1e6;
  double q_min = 0.002, q_grid_max = 0.038;
  int q_steps = 10;
  double n_min = 1e4, n_max = 1e12;
  int n_points = 33;

  auto* rate = app.add_subcommand("rate", "Optimized key rate at one (Q, N) point");
  add_common_flags(rate, &cfg);
  rate->add_option("--qber", q_err, "Channel error rate Q");
  rate->add_option("--signals", signals, "Total signal count N");

  auto* threshold =
      app.add_subcommand("threshold", "Threshold signal number N0 over a Q grid");
  add_common_flags(threshold, &cfg);
  threshold->add_option("--qber-min", q_min, "Smallest Q (default 0.002)");
  threshold->add_option("--qber-max", q_grid_max, "Largest Q (default 0.038)");
  threshold->add_option("--qber-steps", q_steps, "Grid size (default 10)");

  auto* sweep = app.add_subcommand("sweep", "Rate vs N on a log grid");
  add_common_flags(sweep, &cfg);
  sweep->add_option("--qber", q_err, "Channel error rate Q (default 0.05)");
  sweep->add_option("--signals-min", n_min, "Smallest N (default 1e4)");
  sweep->add_option("--signals-max", n_max, "Largest N (default 1e12)");
  sweep->add_option("--points", n_points, "Number of grid points");

  auto* compare = app.add_subcommand(
      "compare-pe", "CPOVM vs IPOVM optimized rates and relative improvement");
  add_common_flags(compare, &cfg);
  compare->add_option("--qber", q_err, "Channel error rate Q (default 0.05)");
  compare->add_option("--signals-min", n_min, "Smallest N");
  compare->add_option("--signals-max", n_max, "Largest N");
  compare->add_option("--points", n_points, "Number of grid points");

  auto* verify = app.add_subcommand(
      "verify", "Run the oracle agreement suites and the Monte Carlo check");
  add_common_flags(verify, &cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (rate->parsed()) return run_rate(cfg, q_err, signals);
    if (threshold->parsed()) return run_threshold(cfg, q_min, q_grid_max, q_steps);
    if (sweep->parsed()) return run_sweep(cfg, q_err, n_min, n_max, n_points);
    if (compare->parsed()) return run_compare_pe(cfg, q_err, n_min, n_max, n_points);
    if (verify->parsed()) return run_verify(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
