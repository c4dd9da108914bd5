#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "dluforge/verify/sweep.hpp"

namespace dluforge {

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline NormKind norm_kind_from_json(const std::string& s) {
  if (s == "sup") return NormKind::Sup;
  if (s == "l1") return NormKind::L1;
  if (s == "l2") return NormKind::L2;
  if (s == "lp") return NormKind::Lp;
  throw ParseError("unknown norm kind '" + s + "'", "/norm/kind");
}

inline std::string norm_kind_name(NormKind k) {
  switch (k) {
    case NormKind::Sup: return "sup";
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::Lp: return "lp";
  }
  return "?";
}

}  // namespace detail

inline constexpr const char* kCsvHeader = "parameter,measured_error,theoretical_bound,depth,width,weights\n";

/// Plot-ready rows; a missing bound is an empty field.
inline std::string to_csv(const SweepResult& s) {
  std::string out = kCsvHeader;
  for (std::size_t i = 0; i < s.reports.size(); ++i) {
    const auto& r = s.reports[i];
    out += detail::fmt17(s.values[i]) + "," + detail::fmt17(r.measured_error) + "," +
           (r.theoretical_bound ? detail::fmt17(*r.theoretical_bound) : std::string()) + "," +
           std::to_string(r.audit.depth) + "," + std::to_string(r.audit.width) + "," +
           std::to_string(r.audit.nonzero_weights) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const ErrorReport& r) {
  nlohmann::json j;
  j["target_name"] = r.target_name;
  j["network_id"] = r.network_id;
  j["norm"] = {{"kind", detail::norm_kind_name(r.norm.kind)}, {"p", r.norm.p}, {"weighted", r.norm.weighted}};
  j["measured_error"] = r.measured_error;
  j["theoretical_bound"] = r.theoretical_bound ? nlohmann::json(*r.theoretical_bound) : nlohmann::json(nullptr);
  j["grid"] = {{"kind", std::string(to_string(r.grid.kind))},
               {"points", r.grid.points},
               {"seed", r.grid.seed ? nlohmann::json(*r.grid.seed) : nlohmann::json(nullptr)}};
  j["audit"] = {{"depth", r.audit.depth},
                {"width", r.audit.width},
                {"nonzero_weights", r.audit.nonzero_weights},
                {"claimed", r.budget_claimed},
                {"claimed_depth", r.audit.claimed_depth},
                {"claimed_width", r.audit.claimed_width},
                {"claimed_weights", r.audit.claimed_weights},
                {"within_budget", r.audit.within_budget}};
  j["standard_error"] = r.standard_error ? nlohmann::json(*r.standard_error) : nlohmann::json(nullptr);
  return j;
}

inline ErrorReport error_report_from_json(const nlohmann::json& j) {
  try {
    ErrorReport r;
    r.target_name = j.at("target_name").get<std::string>();
    r.network_id = j.at("network_id").get<std::string>();
    const auto& n = j.at("norm");
    r.norm.kind = detail::norm_kind_from_json(n.at("kind").get<std::string>());
    r.norm.p = n.at("p").get<double>();
    r.norm.weighted = n.at("weighted").get<bool>();
    r.measured_error = j.at("measured_error").get<double>();
    if (!j.at("theoretical_bound").is_null()) r.theoretical_bound = j.at("theoretical_bound").get<double>();
    const auto& g = j.at("grid");
    r.grid.kind = grid_kind_from_string(g.at("kind").get<std::string>());
    r.grid.points = g.at("points").get<long>();
    if (!g.at("seed").is_null()) r.grid.seed = g.at("seed").get<std::uint64_t>();
    const auto& a = j.at("audit");
    r.audit.depth = a.at("depth").get<long>();
    r.audit.width = a.at("width").get<long>();
    r.audit.nonzero_weights = a.at("nonzero_weights").get<long>();
    r.budget_claimed = a.at("claimed").get<bool>();
    r.audit.claimed_depth = a.at("claimed_depth").get<long>();
    r.audit.claimed_width = a.at("claimed_width").get<long>();
    r.audit.claimed_weights = a.at("claimed_weights").get<long>();
    r.audit.within_budget = a.at("within_budget").get<bool>();
    if (!j.at("standard_error").is_null()) r.standard_error = j.at("standard_error").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed error report: ") + e.what(), "report");
  }
}

inline nlohmann::json to_json(const SweepResult& s) {
  nlohmann::json j;
  j["parameter"] = s.parameter;
  j["values"] = s.values;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : s.reports) j["reports"].push_back(to_json(r));
  j["rate_fit"] = std::string(to_string(s.method));
  j["rate"] = s.rate ? nlohmann::json(*s.rate) : nlohmann::json(nullptr);
  j["partial"] = s.partial;
  j["failure"] = s.failure;
  return j;
}

inline SweepResult sweep_from_json(const nlohmann::json& j) {
  try {
    SweepResult s;
    s.parameter = j.at("parameter").get<std::string>();
    s.values = j.at("values").get<std::vector<double>>();
    for (const auto& r : j.at("reports")) s.reports.push_back(error_report_from_json(r));
    s.method = rate_fit_from_string(j.at("rate_fit").get<std::string>());
    if (!j.at("rate").is_null()) s.rate = j.at("rate").get<double>();
    s.partial = j.at("partial").get<bool>();
    s.failure = j.at("failure").get<std::string>();
    if (s.values.size() != s.reports.size()) throw ParseError("values and reports differ in length", "sweep");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed sweep: ") + e.what(), "sweep");
  }
}

/// Pretty JSON with sorted keys (nlohmann objects are ordered maps), so the
/// text depends only on the data.
inline std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  f.flush();
  if (!f) throw Error("cannot write '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace dluforge
