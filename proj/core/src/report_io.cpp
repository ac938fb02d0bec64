#include "edens/report_io.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace edens {

namespace {

using nlohmann::json;

json row_json(const TableRow& row) {
  json j;
  j["r"] = row.r ? json(*row.r) : json(nullptr);
  j["R_or_t"] = row.radius;
  j["estimate"] = row.estimate;
  j["error_bound"] = row.error_bound;
  j["flags"] = row.flags;
  return j;
}

TableRow row_from(const json& j) {
  TableRow row;
  if (!j.at("r").is_null()) row.r = j.at("r").get<double>();
  row.radius = j.at("R_or_t").get<double>();
  row.estimate = j.at("estimate").get<double>();
  row.error_bound = j.at("error_bound").get<double>();
  row.flags = j.at("flags").get<std::string>();
  return row;
}

json to_json(const DensityReport& rep) {
  json rows = json::array();
  for (const auto& row : rep.table.rows) rows.push_back(row_json(row));
  json table;
  table["rows"] = rows;
  table["extrapolated"] = rep.table.extrapolated;
  table["extrapolated_error"] = rep.table.extrapolated_error;
  table["trend"] = rep.table.trend;
  table["flags"] = rep.table.flags;
  json j;
  j["functional"] = rep.functional;
  j["subject"] = rep.subject;
  j["table"] = table;
  j["config"] = rep.config;
  j["warnings"] = rep.warnings;
  return j;
}

DensityReport from_json(const json& j) {
  DensityReport rep;
  rep.functional = j.at("functional").get<std::string>();
  rep.subject = j.at("subject").get<std::string>();
  const auto& table = j.at("table");
  for (const auto& row : table.at("rows")) rep.table.rows.push_back(row_from(row));
  rep.table.extrapolated = table.at("extrapolated").get<double>();
  rep.table.extrapolated_error = table.at("extrapolated_error").get<double>();
  rep.table.trend = table.at("trend").get<std::string>();
  rep.table.flags = table.at("flags").get<std::map<std::string, bool>>();
  rep.config = j.at("config").get<std::map<std::string, std::string>>();
  rep.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rep;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const DensityReport& report, int indent) {
  return to_json(report).dump(indent);
}

DensityReport report_from_json(const std::string& text) {
  try {
    return from_json(parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
}

std::string reports_to_json(std::span<const DensityReport> reports, int indent) {
  json arr = json::array();
  for (const auto& rep : reports) arr.push_back(to_json(rep));
  return arr.dump(indent);
}

std::vector<DensityReport> reports_from_json(const std::string& text) {
  const auto arr = parse(text);
  if (!arr.is_array()) throw std::invalid_argument("report json: expected an array");
  std::vector<DensityReport> out;
  try {
    for (const auto& j : arr) out.push_back(from_json(j));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("report json: ") + e.what());
  }
  return out;
}

std::string csv_header() { return "functional,r,R_or_t,estimate,error_bound,flags\n"; }

std::string report_to_csv(const DensityReport& report, bool header) {
  std::string out = header ? csv_header() : std::string();
  for (const auto& row : report.table.rows) {
    std::string flags = row.flags;
    for (char& c : flags) {
      if (c == ',' || c == '\n') c = ';';
    }
    out += report.functional + "," + (row.r ? g17(*row.r) : std::string()) + "," +
           g17(row.radius) + "," + g17(row.estimate) + "," + g17(row.error_bound) + "," + flags +
           "\n";
  }
  return out;
}

std::string reports_to_csv(std::span<const DensityReport> reports) {
  std::string out = csv_header();
  for (const auto& rep : reports) out += report_to_csv(rep, false);
  return out;
}

}  // namespace edens
