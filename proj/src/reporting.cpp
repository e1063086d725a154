#include "qso/reporting.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace qso {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_norm_series_csv(std::ostream& os, const TrajectoryReport& report) {
  os << "step,sup_norm,center_distance\n";
  for (std::size_t t = 0; t < report.sup_norm_series.size(); ++t)
    os << t << ',' << format_double(report.sup_norm_series[t]) << ','
       << format_double(report.center_distance_series[t]) << '\n';
}

nlohmann::ordered_json trajectory_summary(const TrajectoryReport& report) {
  nlohmann::ordered_json j;
  j["steps"] = report.steps;
  j["verdict"] = std::string(to_string(report.verdict));
  if (report.cycle)
    j["cycle"] = {{"preperiod", report.cycle->preperiod}, {"period", report.cycle->period}};
  else
    j["cycle"] = nullptr;
  j["final_sup_norm"] = report.sup_norm_series.back();
  j["final_center_distance"] = report.center_distance_series.back();
  return j;
}

std::string iso8601_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace qso
