#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace medest {

// One metric cell. Optional fields serialize as empty CSV cells / JSON nulls.
struct ReportRow {
  std::string law;
  std::string estimator;
  double delta = 0.0;
  std::optional<double> tau;
  std::size_t K = 0;
  std::size_t B = 0;
  std::string metric_name;
  double value = 0.0;
  std::optional<double> stderr_;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::string config_hash;  // hex FNV-1a of the resolved config text
  std::uint64_t seed = 0;
  std::string resolved_config;
};

enum class ReportFormat { Csv, Json };

std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);

// Deterministic bytes for a given report; failures carry the path.
void write_report(const ExperimentReport& report, const std::string& path,
                  ReportFormat format);

// %.17g formatting used for every float the reports emit.
std::string format_double(double v);

}  // namespace medest
