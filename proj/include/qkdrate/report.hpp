#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkdrate/key_rate.hpp"

namespace qkd {

enum class OutputFormat { Csv, Json };

struct ThresholdRow {
  double q_err = 0.0;
  double n0 = 0.0;
  double n0_scaled = 0.0;
};

struct SweepRow {
  double total = 0.0;
  double rate = 0.0;
  double rate_clamped = 0.0;  // max(rate, 0), for plotting
};

struct ComparePeRow {
  double total = 0.0;
  double rate_ipovm = 0.0;
  double rate_cpovm = 0.0;
  double improvement_percent = 0.0;
};

/// 17 significant digits, enough for CSV and JSON to round-trip doubles.
std::string format_double(double value);
double parse_double(const std::string& text);

void to_json(nlohmann::ordered_json& j, const SecurityBudget& budget);
void from_json(const nlohmann::ordered_json& j, SecurityBudget& budget);
void to_json(nlohmann::ordered_json& j, const RateBreakdown& breakdown);
void from_json(const nlohmann::ordered_json& j, RateBreakdown& breakdown);
void to_json(nlohmann::ordered_json& j, const ThresholdRow& row);
void from_json(const nlohmann::ordered_json& j, ThresholdRow& row);
void to_json(nlohmann::ordered_json& j, const SweepRow& row);
void from_json(const nlohmann::ordered_json& j, SweepRow& row);
void to_json(nlohmann::ordered_json& j, const ComparePeRow& row);
void from_json(const nlohmann::ordered_json& j, ComparePeRow& row);

std::vector<std::string> csv_header(const RateBreakdown&);
std::vector<std::string> csv_header(const ThresholdRow&);
std::vector<std::string> csv_header(const SweepRow&);
std::vector<std::string> csv_header(const ComparePeRow&);

std::vector<std::string> csv_fields(const RateBreakdown& row);
std::vector<std::string> csv_fields(const ThresholdRow& row);
std::vector<std::string> csv_fields(const SweepRow& row);
std::vector<std::string> csv_fields(const ComparePeRow& row);

RateBreakdown breakdown_from_fields(const std::vector<std::string>& fields);
ThresholdRow threshold_from_fields(const std::vector<std::string>& fields);
SweepRow sweep_from_fields(const std::vector<std::string>& fields);
ComparePeRow compare_from_fields(const std::vector<std::string>& fields);

/// Splits CSV text into lines of comma-separated fields, header included.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

template <typename Row>
void write_csv(std::ostream& out, const std::vector<Row>& rows) {
  const auto header = csv_header(Row{});
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const Row& row : rows) {
    const auto fields = csv_fields(row);
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << fields[i];
    }
    out << '\n';
  }
}

template <typename Row>
void write_json(std::ostream& out, const std::string& command,
                const std::vector<Row>& rows) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["rows"] = nlohmann::ordered_json::array();
  for (const Row& row : rows) {
    nlohmann::ordered_json item;
    to_json(item, row);
    j["rows"].push_back(std::move(item));
  }
  out << j.dump(2) << '\n';
}

}  // namespace qkd
