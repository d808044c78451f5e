#include "rankmatch/csv.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace rankmatch {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::vector<ExamRecord> parse_exam_csv(std::istream& in, const CsvSchema& schema) {
  if (schema.columns.size() != 3 || schema.weights.size() != 3) {
    throw std::invalid_argument("exam schema needs exactly three columns and weights");
  }
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    have_header = !blank(line);
  }
  if (!have_header) throw CsvError(CsvErrorKind::kEmptyFile, "CSV input is empty");

  const auto header = split(line);
  std::vector<std::size_t> index;
  for (const auto& name : schema.columns) {
    std::size_t found = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] == name) found = c;
    }
    if (found == header.size()) {
      throw CsvError(CsvErrorKind::kMissingColumn, "CSV header is missing column '" + name + "'",
                     line_no, name);
    }
    index.push_back(found);
  }

  std::vector<ExamRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto cells = split(line);
    double v[3];
    for (std::size_t c = 0; c < 3; ++c) {
      const std::string& name = schema.columns[c];
      if (index[c] >= cells.size()) {
        throw CsvError(CsvErrorKind::kShortRow,
                       "row " + std::to_string(line_no) + " has no value for column '" + name + "'",
                       line_no, name);
      }
      const std::string_view cell = cells[index[c]];
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, last, v[c]);
      if (cell.empty() || ec != std::errc() || ptr != last) {
        throw CsvError(CsvErrorKind::kNonNumeric,
                       "row " + std::to_string(line_no) + ", column '" + name +
                           "': not a number: '" + std::string(cell) + "'",
                       line_no, name);
      }
    }
    ExamRecord r{v[0], v[1], v[2], 0.0};
    r.overall = schema.weights[0] * v[0] + schema.weights[1] * v[1] + schema.weights[2] * v[2];
    records.push_back(r);
  }
  if (records.empty()) throw CsvError(CsvErrorKind::kEmptyFile, "CSV input has no data rows");
  return records;
}

std::vector<ExamRecord> ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw CsvError(CsvErrorKind::kUnreadable, "cannot open '" + path + "'");
  return parse_exam_csv(in, schema);
}

void write_exam_csv(std::ostream& out, const std::vector<ExamRecord>& records) {
  out << "midterm1,midterm2,final\n";
  for (const auto& r : records) {
    out << r.midterm1 << ',' << r.midterm2 << ',' << r.final_exam << '\n';
  }
}

}  // namespace rankmatch
