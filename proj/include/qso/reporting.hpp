#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "qso/dynamics.hpp"

namespace qso {

// 17 significant digits, enough to round-trip a double through text.
std::string format_double(double v);

// Fixed schema: header "step,sup_norm,center_distance", one row per step.
void write_norm_series_csv(std::ostream& os, const TrajectoryReport& report);

nlohmann::ordered_json trajectory_summary(const TrajectoryReport& report);

std::string iso8601_timestamp();

}  // namespace qso
