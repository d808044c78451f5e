#include "rankmatch/result_bundle.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rankmatch {

OutputFormat parse_output_format(const std::string& name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw std::invalid_argument("unknown output format '" + name + "' (expected json or csv)");
}

std::string format_number(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

nlohmann::json to_json(const ResultBundle& b) {
  nlohmann::json j;
  j["schema"] = b.schema;
  j["experiment"] = b.experiment;
  j["config"] = b.config;
  j["series"] = b.series;
  j["summary"] = b.summary;
  j["notes"] = b.notes;
  j["table"] = {{"columns", b.table.columns}, {"rows", b.table.rows}};
  j["provenance"] = {{"seed", b.seed}, {"version", b.version}};
  return j;
}

ResultBundle bundle_from_json(const nlohmann::json& j) {
  ResultBundle b;
  b.schema = j.at("schema").get<std::string>();
  if (b.schema != kBundleSchema) {
    throw std::runtime_error("unsupported bundle schema '" + b.schema + "'");
  }
  b.experiment = j.at("experiment").get<std::string>();
  b.config = j.at("config");
  b.series = j.at("series").get<std::map<std::string, std::vector<double>>>();
  b.summary = j.at("summary").get<std::map<std::string, double>>();
  b.notes = j.at("notes").get<std::map<std::string, std::string>>();
  b.table.columns = j.at("table").at("columns").get<std::vector<std::string>>();
  b.table.rows = j.at("table").at("rows").get<std::vector<std::vector<std::string>>>();
  b.seed = j.at("provenance").at("seed").get<std::uint64_t>();
  b.version = j.at("provenance").at("version").get<std::string>();
  return b;
}

namespace {

std::string serialize_csv(const ResultBundle& b) {
  std::ostringstream out;
  out << "# schema=" << kTableSchema << '\n';
  out << "# experiment=" << b.experiment << '\n';
  out << "# seed=" << b.seed << '\n';
  out << "# version=" << b.version << '\n';
  out << "# config=" << b.config.dump() << '\n';
  for (const auto& [key, value] : b.summary) out << "# summary." << key << '=' << format_number(value) << '\n';
  for (const auto& [key, value] : b.notes) out << "# note." << key << '=' << value << '\n';

  auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) out << (c ? "," : "") << cells[c];
    out << '\n';
  };

  if (!b.table.empty()) {
    write_row(b.table.columns);
    for (const auto& row : b.table.rows) write_row(row);
    return out.str();
  }

  std::vector<std::string> header{"index"};
  std::size_t length = 0;
  for (const auto& [name, values] : b.series) {
    header.push_back(name);
    length = std::max(length, values.size());
  }
  write_row(header);
  for (std::size_t r = 0; r < length; ++r) {
    std::vector<std::string> row{std::to_string(r)};
    for (const auto& [name, values] : b.series) {
      row.push_back(r < values.size() ? format_number(values[r]) : std::string{});
    }
    write_row(row);
  }
  return out.str();
}

}  // namespace

std::string serialize(const ResultBundle& bundle, OutputFormat format) {
  if (format == OutputFormat::kJson) return to_json(bundle).dump(2) + "\n";
  return serialize_csv(bundle);
}

void emit(const ResultBundle& bundle, const std::string& path, OutputFormat format) {
  const std::string text = serialize(bundle, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

ResultBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return bundle_from_json(nlohmann::json::parse(in));
}

}  // namespace rankmatch
