#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace rankmatch {

inline constexpr const char* kBundleSchema = "rankmatch.result.v1";
inline constexpr const char* kTableSchema = "rankmatch.table.v1";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool empty() const { return columns.empty(); }
  bool operator==(const Table&) const = default;
};

// Everything an experiment produced, plus what is needed to re-run it.
struct ResultBundle {
  std::string schema = kBundleSchema;
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, double> summary;
  std::map<std::string, std::string> notes;
  Table table;
  std::uint64_t seed = 0;
  std::string version;

  bool operator==(const ResultBundle&) const = default;
};

enum class OutputFormat {
  kJson,  // structured object
  kCsv,   // delimited table
};

OutputFormat parse_output_format(const std::string& name);

nlohmann::json to_json(const ResultBundle& bundle);
ResultBundle bundle_from_json(const nlohmann::json& j);

// Byte-stable for a given bundle.
std::string serialize(const ResultBundle& bundle, OutputFormat format);

// Writes serialize(bundle, format) to path; throws std::runtime_error if the
// file cannot be written.
void emit(const ResultBundle& bundle, const std::string& path, OutputFormat format);

// Reads a bundle written with OutputFormat::kJson.
ResultBundle load_bundle(const std::string& path);

// Shortest decimal that round-trips.
std::string format_number(double v);

}  // namespace rankmatch
