// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qkdrate/discrimination.hpp"
#include "qkdrate/entropy.hpp"
#include "qkdrate/key_rate.hpp"
#include "qkdrate/parameter_estimation.hpp"
#include "qkdrate/report.hpp"

using namespace qkd;

namespace {

int g_failures = 0;
std::chrono::steady_clock::time_point g_mark;

void mark() { g_mark = std::chrono::steady_clock::now(); }

// limit_s <= 0 means the criterion has no stated runtime budget
void report(int id, bool pass, const std::string& what, const std::string& detail,
            double limit_s = 0.0) {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - g_mark)
          .count();
  if (limit_s > 0.0 && elapsed >= limit_s) pass = false;
  std::string timing = " [" + std::to_string(elapsed).substr(0, 5) + " s";
  if (limit_s > 0.0) {
    timing += ", limit " + std::to_string(static_cast<int>(limit_s)) + " s";
  }
  timing += "]";
  std::printf("[%s] criterion %d: %s (%s)%s\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), detail.c_str(), timing.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

RateOptions options_for(Bound bound) {
  RateOptions opt;
  opt.bound = bound;
  return opt;  // engine defaults: per-basis yields, pe_scale 4
}

// --- 1: d = 2 reduction of the general-d guessing probability ---------------
void criterion_1() {
  mark();
  double max_err = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double q = 0.3 * i / 400.0;
    max_err = std::max(max_err,
                       std::abs(pguess_dplus1(2, q) - pguess_six_state(q)));
  }
  report(1, max_err <= 1e-12, "d=2 reduction identity",
         fmt("max |Eq(d=2) - six-state| = %.3e, tol 1e-12", max_err), 1.0);
}

// --- 2: Helstrom oracle vs closed form --------------------------------------
void criterion_2() {
  mark();
  double max_err = 0.0;
  double max_v_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double q = 0.001 + (0.25 - 0.001) * i / 99.0;
    const double oracle = helstrom_pguess(build_eve_states_bb84(q, q, q));
    max_err = std::max(max_err, std::abs(oracle - pguess_bb84(q)));
    max_v_err = std::max(max_v_err, std::abs(maximize_f_over_v(q).v_star - q));
  }
  report(2, max_err <= 1e-10 && max_v_err <= 1e-6, "Helstrom oracle",
         fmt("max |oracle - closed form| = %.3e (tol 1e-10), max |v* - Q| = %.3e "
             "(tol 1e-6)",
             max_err, max_v_err),
         5.0);
}

// --- 3: square-root-measurement oracle vs closed form -----------------------
void criterion_3() {
  mark();
  double max_err = 0.0;
  for (int d : {2, 3, 5, 7, 11, 13, 17}) {
    for (int i = 0; i < 15; ++i) {
      const double q = 0.01 + (0.15 - 0.01) * i / 14.0;
      max_err = std::max(max_err,
                         std::abs(srm_pguess_numeric(d, q) - pguess_dplus1(d, q)));
    }
  }
  report(3, max_err <= 1e-9, "square-root-measurement oracle",
         fmt("max |numeric - closed form| = %.3e, tol 1e-9", max_err), 10.0);
}

// --- 4: CPOVM vs IPOVM improvement ------------------------------------------
double improvement_percent(const ProtocolSpec& base, double n_total) {
  auto cpovm = base;
  cpovm.pe = PeScheme::Cpovm;
  auto ipovm = base;
  ipovm.pe = PeScheme::Ipovm;
  const RateOptions opt = options_for(Bound::VonNeumann);
  const double rc = optimize_rate(cpovm, 0.05, n_total, 1e-9, 1e-10, opt).best.rate;
  const double ri = optimize_rate(ipovm, 0.05, n_total, 1e-9, 1e-10, opt).best.rate;
  return 100.0 * (rc - ri) / ri;
}

void criterion_4() {
  mark();
  const double six_1e6 = improvement_percent(ProtocolSpec::six_state(), 1e6);
  const double bb_1e6 = improvement_percent(ProtocolSpec::bb84(), 1e6);
  const double six_1e10 = improvement_percent(ProtocolSpec::six_state(), 1e10);
  const double bb_1e10 = improvement_percent(ProtocolSpec::bb84(), 1e10);
  const bool pass = std::abs(six_1e6 - 72.0) <= 15.0 &&
                    std::abs(bb_1e6 - 35.0) <= 10.0 &&
                    std::abs(six_1e10 - 3.0) <= 2.0 &&
                    std::abs(bb_1e10 - 2.0) <= 2.0;
  report(4, pass, "CPOVM over IPOVM improvement",
         fmt("N=1e6: six %.1f%% (72+-15), bb84 %.1f%% (35+-10); N=1e10: six "
             "%.2f%% (3+-2), bb84 %.2f%% (2+-2)",
             six_1e6, bb_1e6, six_1e10, bb_1e10),
         120.0);
}

// --- 5 & 6: threshold signal numbers ----------------------------------------
struct ThresholdPair {
  double n0_min = 0.0;
  double n0_vn = 0.0;
  double ratio() const { return n0_min / n0_vn; }
};

ThresholdPair thresholds_at(const ProtocolSpec& proto, double q) {
  ThresholdPair t;
  t.n0_min = find_threshold_n0(proto, q, 1e-9, 1e-10, options_for(Bound::MinEntropy)).n0;
  t.n0_vn = find_threshold_n0(proto, q, 1e-9, 1e-10, options_for(Bound::VonNeumann)).n0;
  return t;
}

void criteria_5_and_6() {
  mark();
  const auto bb_low = thresholds_at(ProtocolSpec::bb84(), 0.002);
  const auto six_low = thresholds_at(ProtocolSpec::six_state(), 0.002);
  const auto bb_high = thresholds_at(ProtocolSpec::bb84(), 0.038);
  const auto six_high = thresholds_at(ProtocolSpec::six_state(), 0.038);

  const bool pass5 = std::abs(bb_low.ratio() - 0.5) <= 0.15 &&
                     std::abs(six_low.ratio() - 0.5) <= 0.15 &&
                     std::abs(six_high.ratio() - 0.7) <= 0.15 &&
                     std::abs(bb_high.ratio() - 0.9) <= 0.1;
  report(5, pass5, "min/von-Neumann threshold ratios",
         fmt("Q=0.002: bb84 %.3f, six %.3f (0.5+-0.15); Q=0.038: six %.3f "
             "(0.7+-0.15), bb84 %.3f (0.9+-0.1)",
             bb_low.ratio(), six_low.ratio(), six_high.ratio(), bb_high.ratio()));

  mark();
  bool pass6 = true;
  std::ostringstream detail;
  for (double q : {0.002, 0.005, 0.01}) {
    for (const auto& proto : {ProtocolSpec::bb84(), ProtocolSpec::six_state()}) {
      const auto t = thresholds_at(proto, q);
      const bool ok = t.n0_min >= 1e4 && t.n0_min < 1e6 && t.n0_min < t.n0_vn;
      pass6 = pass6 && ok;
      detail << proto.name() << "@" << q << ": " << fmt("%.3g", t.n0_min)
             << (ok ? " " : "(!) ");
    }
  }
  report(6, pass6, "small-N milestone: min-entropy N0 in [1e4, 1e6) below vN N0",
         detail.str());
}

// --- 7: asymptotic sanity ----------------------------------------------------
void criterion_7() {
  mark();
  const auto res = optimize_rate(ProtocolSpec::bb84(), 0.05, 1e14, 1e-9, 1e-10,
                                 options_for(Bound::VonNeumann));
  const double q = res.params.q_key;
  const double asymptote = q * q * (1.0 - 2.2 * binary_entropy(0.05));
  const double rel = std::abs(res.best.rate - asymptote) / asymptote;
  report(7, rel <= 0.01, "asymptotic von Neumann rate at N = 1e14",
         fmt("rate %.6f vs q^2 (1 - 2.2 h(0.05)) = %.6f, rel err %.4f%%",
             res.best.rate, asymptote, 100.0 * rel));
}

// --- 8: Theorem-style Monte Carlo bound -------------------------------------
void criterion_8() {
  mark();
  bool pass = true;
  std::ostringstream detail;
  const std::vector<double> dist = {0.95, 0.05};
  for (double eps : {0.5, 0.1, 0.01}) {
    for (int m : {50, 500}) {
      const auto res = simulate_pe_bound(dist, m, eps, 10000, 20240917ULL);
      pass = pass && res.violation_rate <= eps;
      detail << fmt("eps=%.2g,m=%d: %.4f ", eps, m, res.violation_rate);
    }
  }
  report(8, pass, "Monte Carlo deviation bound holds", detail.str(), 30.0);
}

// --- 9: property suites -------------------------------------------------------
void criterion_9() {
  mark();
  bool pass = true;
  std::ostringstream detail;

  // budget invariant + recomposition on a parameter sweep
  double max_recomp = 0.0;
  try {
    for (double n_total : {1e5, 1e7, 1e10}) {
      for (auto bound : {Bound::VonNeumann, Bound::MinEntropy}) {
        for (const auto& proto :
             {ProtocolSpec::bb84(), ProtocolSpec::six_state(), ProtocolSpec::d_bases(7)}) {
          RateOptions opt = options_for(bound);
          const auto res = optimize_rate(proto, 0.03, n_total, 1e-9, 1e-10, opt);
          res.best.budget.validate();
          max_recomp = std::max(max_recomp,
                                std::abs(res.best.rate - res.best.recompose()));
        }
      }
    }
  } catch (const std::exception& e) {
    pass = false;
    detail << "invariant violation: " << e.what() << "; ";
  }
  if (max_recomp > 1e-12) pass = false;
  detail << fmt("max recomposition residual %.2e; ", max_recomp);

  // optimizer determinism
  const RateOptions opt = options_for(Bound::VonNeumann);
  const auto a = optimize_rate(ProtocolSpec::six_state(), 0.05, 1e6, 1e-9, 1e-10, opt);
  const auto b = optimize_rate(ProtocolSpec::six_state(), 0.05, 1e6, 1e-9, 1e-10, opt);
  const bool deterministic = a.best.rate == b.best.rate &&
                             a.params.q_key == b.params.q_key &&
                             a.params.eps_pe == b.params.eps_pe;
  if (!deterministic) pass = false;
  detail << (deterministic ? "optimizer deterministic; " : "optimizer NOT deterministic; ");

  // serialization round trip on real breakdowns
  std::vector<RateBreakdown> rows = {a.best, b.best};
  std::ostringstream csv;
  write_csv(csv, rows);
  std::istringstream in(csv.str());
  const auto lines = parse_csv(in);
  bool roundtrip = lines.size() == 3;
  if (roundtrip) {
    const auto back = breakdown_from_fields(lines[1]);
    roundtrip = back.rate == a.best.rate && back.q_eff == a.best.q_eff &&
                back.budget.eps_bar == a.best.budget.eps_bar;
  }
  nlohmann::ordered_json j;
  to_json(j, a.best);
  RateBreakdown jback;
  from_json(j, jback);
  roundtrip = roundtrip && jback.rate == a.best.rate && jback.m == a.best.m;
  if (!roundtrip) pass = false;
  detail << (roundtrip ? "round trip lossless" : "round trip LOSSY");

  report(9, pass, "property suites", detail.str());
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criteria_5_and_6();
  criterion_7();
  criterion_8();
  criterion_9();
  const double secs =
      std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
