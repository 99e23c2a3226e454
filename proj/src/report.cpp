#include "medest/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace medest {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "law,estimator,delta,tau,K,B,metric_name,value,stderr,seed\n";
  for (const auto& row : report.rows) {
    out << row.law << ',' << row.estimator << ',' << format_double(row.delta)
        << ',';
    if (row.tau) out << format_double(*row.tau);
    out << ',' << row.K << ',' << row.B << ',' << row.metric_name << ','
        << format_double(row.value) << ',';
    if (row.stderr_) out << format_double(*row.stderr_);
    out << ',' << row.seed << "\n";
  }
  return out.str();
}

std::string report_to_json(const ExperimentReport& report) {
  nlohmann::ordered_json doc;
  doc["provenance"] = {
      {"config_hash", report.config_hash},
      {"seed", report.seed},
      {"resolved_config", report.resolved_config},
  };
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json j;
    j["law"] = row.law;
    j["estimator"] = row.estimator;
    j["delta"] = row.delta;
    if (row.tau) {
      j["tau"] = *row.tau;
    } else {
      j["tau"] = nullptr;
    }
    j["K"] = row.K;
    j["B"] = row.B;
    j["metric_name"] = row.metric_name;
    if (std::isfinite(row.value)) {
      j["value"] = row.value;
    } else {
      j["value"] = format_double(row.value);
    }
    if (row.stderr_) {
      j["stderr"] = *row.stderr_;
    } else {
      j["stderr"] = nullptr;
    }
    j["seed"] = row.seed;
    doc["rows"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const std::string& path,
                  ReportFormat format) {
  const std::string body =
      format == ReportFormat::Csv ? report_to_csv(report) : report_to_json(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open report file for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("failed writing report file: " + path);
}

}  // namespace medest
