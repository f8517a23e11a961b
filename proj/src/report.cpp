#include "qkdrate/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qkd {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("trailing text after number: " + text);
  return v;
}

void to_json(nlohmann::ordered_json& j, const SecurityBudget& budget) {
  j = nlohmann::ordered_json{{"eps_total", budget.eps_total},
                             {"eps_ec", budget.eps_ec},
                             {"eps_pe", budget.eps_pe},
                             {"eps_pa", budget.eps_pa},
                             {"eps_bar", budget.eps_bar}};
}

void from_json(const nlohmann::ordered_json& j, SecurityBudget& budget) {
  j.at("eps_total").get_to(budget.eps_total);
  j.at("eps_ec").get_to(budget.eps_ec);
  j.at("eps_pe").get_to(budget.eps_pe);
  j.at("eps_pa").get_to(budget.eps_pa);
  j.at("eps_bar").get_to(budget.eps_bar);
}

void to_json(nlohmann::ordered_json& j, const RateBreakdown& b) {
  nlohmann::ordered_json budget;
  to_json(budget, b.budget);
  j = nlohmann::ordered_json{{"rate", b.rate},
                             {"rate_clamped", b.rate > 0.0 ? b.rate : 0.0},
                             {"signals", b.total},
                             {"n", b.n},
                             {"m", b.m},
                             {"q_key", b.q_key},
                             {"entropy_term", b.entropy_term},
                             {"delta", b.delta},
                             {"leak_ec", b.leak},
                             {"pa_term", b.pa_term},
                             {"q_eff", b.q_eff},
                             {"deviation", b.deviation},
                             {"clamped", b.clamped},
                             {"budget", std::move(budget)}};
}

void from_json(const nlohmann::ordered_json& j, RateBreakdown& b) {
  j.at("rate").get_to(b.rate);
  j.at("signals").get_to(b.total);
  j.at("n").get_to(b.n);
  j.at("m").get_to(b.m);
  j.at("q_key").get_to(b.q_key);
  j.at("entropy_term").get_to(b.entropy_term);
  j.at("delta").get_to(b.delta);
  j.at("leak_ec").get_to(b.leak);
  j.at("pa_term").get_to(b.pa_term);
  j.at("q_eff").get_to(b.q_eff);
  j.at("deviation").get_to(b.deviation);
  j.at("clamped").get_to(b.clamped);
  from_json(j.at("budget"), b.budget);
}

void to_json(nlohmann::ordered_json& j, const ThresholdRow& row) {
  j = nlohmann::ordered_json{
      {"qber", row.q_err}, {"n0", row.n0}, {"n0_scaled", row.n0_scaled}};
}

void from_json(const nlohmann::ordered_json& j, ThresholdRow& row) {
  j.at("qber").get_to(row.q_err);
  j.at("n0").get_to(row.n0);
  j.at("n0_scaled").get_to(row.n0_scaled);
}

void to_json(nlohmann::ordered_json& j, const SweepRow& row) {
  j = nlohmann::ordered_json{{"signals", row.total},
                             {"rate", row.rate},
                             {"rate_clamped", row.rate_clamped}};
}

void from_json(const nlohmann::ordered_json& j, SweepRow& row) {
  j.at("signals").get_to(row.total);
  j.at("rate").get_to(row.rate);
  j.at("rate_clamped").get_to(row.rate_clamped);
}

void to_json(nlohmann::ordered_json& j, const ComparePeRow& row) {
  j = nlohmann::ordered_json{{"signals", row.total},
                             {"rate_ipovm", row.rate_ipovm},
                             {"rate_cpovm", row.rate_cpovm},
                             {"improvement_percent", row.improvement_percent}};
}

void from_json(const nlohmann::ordered_json& j, ComparePeRow& row) {
  j.at("signals").get_to(row.total);
  j.at("rate_ipovm").get_to(row.rate_ipovm);
  j.at("rate_cpovm").get_to(row.rate_cpovm);
  j.at("improvement_percent").get_to(row.improvement_percent);
}

std::vector<std::string> csv_header(const RateBreakdown&) {
  return {"rate", "rate_clamped", "signals", "n", "m", "q_key", "entropy_term",
          "delta", "leak_ec", "pa_term", "q_eff", "deviation", "clamped",
          "eps_total", "eps_ec", "eps_pe", "eps_pa", "eps_bar"};
}

std::vector<std::string> csv_header(const ThresholdRow&) {
  return {"qber", "n0", "n0_scaled"};
}

std::vector<std::string> csv_header(const SweepRow&) {
  return {"signals", "rate", "rate_clamped"};
}

std::vector<std::string> csv_header(const ComparePeRow&) {
  return {"signals", "rate_ipovm", "rate_cpovm", "improvement_percent"};
}

std::vector<std::string> csv_fields(const RateBreakdown& b) {
  return {format_double(b.rate),
          format_double(b.rate > 0.0 ? b.rate : 0.0),
          format_double(b.total),
          format_double(b.n),
          format_double(b.m),
          format_double(b.q_key),
          format_double(b.entropy_term),
          format_double(b.delta),
          format_double(b.leak),
          format_double(b.pa_term),
          format_double(b.q_eff),
          format_double(b.deviation),
          b.clamped ? "1" : "0",
          format_double(b.budget.eps_total),
          format_double(b.budget.eps_ec),
          format_double(b.budget.eps_pe),
          format_double(b.budget.eps_pa),
          format_double(b.budget.eps_bar)};
}

std::vector<std::string> csv_fields(const ThresholdRow& row) {
  return {format_double(row.q_err), format_double(row.n0),
          format_double(row.n0_scaled)};
}

std::vector<std::string> csv_fields(const SweepRow& row) {
  return {format_double(row.total), format_double(row.rate),
          format_double(row.rate_clamped)};
}

std::vector<std::string> csv_fields(const ComparePeRow& row) {
  return {format_double(row.total), format_double(row.rate_ipovm),
          format_double(row.rate_cpovm), format_double(row.improvement_percent)};
}

RateBreakdown breakdown_from_fields(const std::vector<std::string>& f) {
  if (f.size() != 18) throw std::invalid_argument("expected 18 rate fields");
  RateBreakdown b;
  b.rate = parse_double(f[0]);
  b.total = parse_double(f[2]);
  b.n = parse_double(f[3]);
  b.m = parse_double(f[4]);
  b.q_key = parse_double(f[5]);
  b.entropy_term = parse_double(f[6]);
  b.delta = parse_double(f[7]);
  b.leak = parse_double(f[8]);
  b.pa_term = parse_double(f[9]);
  b.q_eff = parse_double(f[10]);
  b.deviation = parse_double(f[11]);
  b.clamped = f[12] == "1";
  b.budget.eps_total = parse_double(f[13]);
  b.budget.eps_ec = parse_double(f[14]);
  b.budget.eps_pe = parse_double(f[15]);
  b.budget.eps_pa = parse_double(f[16]);
  b.budget.eps_bar = parse_double(f[17]);
  return b;
}

ThresholdRow threshold_from_fields(const std::vector<std::string>& f) {
  if (f.size() != 3) throw std::invalid_argument("expected 3 threshold fields");
  return {parse_double(f[0]), parse_double(f[1]), parse_double(f[2])};
}

SweepRow sweep_from_fields(const std::vector<std::string>& f) {
  if (f.size() != 3) throw std::invalid_argument("expected 3 sweep fields");
  return {parse_double(f[0]), parse_double(f[1]), parse_double(f[2])};
}

ComparePeRow compare_from_fields(const std::vector<std::string>& f) {
  if (f.size() != 4) throw std::invalid_argument("expected 4 comparison fields");
  return {parse_double(f[0]), parse_double(f[1]), parse_double(f[2]),
          parse_double(f[3])};
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    lines.push_back(std::move(fields));
  }
  return lines;
}

}  // namespace qkd
