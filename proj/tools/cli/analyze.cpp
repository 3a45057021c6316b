#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "common.hpp"
#include "peerlens/service/analyzer.hpp"

namespace peerlens::cli {
namespace {

using nlohmann::json;

std::string cell(const json& v) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v.get<double>();
    return s.str();
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_rows(std::ostream& out, const std::string& prefix, const json& section) {
  if (section.is_object() && section.contains("error")) {
    out << std::left << std::setw(40) << prefix << "error: " << section["error"].value("code", "") << '\n';
    return;
  }
  if (!section.is_object()) {
    out << std::left << std::setw(40) << prefix << cell(section) << '\n';
    return;
  }
  for (const auto& [key, value] : section.items()) {
    const auto name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      print_rows(out, name, value);
    } else {
      out << std::left << std::setw(40) << name << cell(value) << '\n';
    }
  }
}

void print_table(std::ostream& out, const json& report) {
  for (const char* key : {"structured", "rubric", "profile"}) print_rows(out, key, report[key]);
  print_rows(out, "overall_estimate", report["overall_estimate"]);
  if (report.contains("estimate_error")) print_rows(out, "estimate", report["estimate_error"]);
  print_rows(out, "degraded", report["degraded"]);
}

}  // namespace

int cmd_analyze(const AnalyzeOptions& o, std::istream& in, std::ostream& out, std::ostream& err) {
  if (o.format != "json" && o.format != "table") {
    err << "--format must be json or table\n";
    return kExitInput;
  }
  try {
    InputFile input(o.input, in);
    const std::string body{std::istreambuf_iterator<char>(input.stream()), {}};
    const auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
      err << service::error_json(service::RequestError(400, "malformed_json", "input is not valid JSON")).dump()
          << '\n';
      return kExitInput;
    }
    const service::Analyzer analyzer(make_engine(o.backends));
    const auto report = analyzer.analyze(service::parse_review_input(doc));
    const auto j = service::to_json(report, service::JsonOptions{!o.omit_timings, false});
    if (o.format == "table") {
      print_table(out, j);
    } else {
      out << j.dump(2) << '\n';
    }
    return report.degraded ? kExitBackend : kExitOk;
  } catch (const service::RequestError& e) {
    err << service::error_json(e).dump() << '\n';
    return e.status() >= 500 ? kExitBackend : kExitInput;
  } catch (const CommandError& e) {
    err << e.what() << '\n';
    return e.exit_code();
  }
}

}  // namespace peerlens::cli
