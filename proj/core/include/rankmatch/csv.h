#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankmatch {

enum class CsvErrorKind {
  kUnreadable,
  kEmptyFile,
  kMissingColumn,
  kNonNumeric,
  kShortRow,
};

class CsvError : public std::runtime_error {
 public:
  // row is the 1-based line number (header = 1); 0 when not row-specific.
  CsvError(CsvErrorKind kind, const std::string& what, std::size_t row = 0,
           std::string column = {})
      : std::runtime_error(what), kind_(kind), row_(row), column_(std::move(column)) {}

  CsvErrorKind kind() const { return kind_; }
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  CsvErrorKind kind_;
  std::size_t row_;
  std::string column_;
};

struct ExamRecord {
  double midterm1 = 0.0;
  double midterm2 = 0.0;
  double final_exam = 0.0;
  double overall = 0.0;

  bool operator==(const ExamRecord&) const = default;
};

// Named columns to read and the weights that combine them into the overall
// score.
struct CsvSchema {
  std::vector<std::string> columns{"midterm1", "midterm2", "final"};
  std::vector<double> weights{0.25, 0.25, 0.5};
};

std::vector<ExamRecord> parse_exam_csv(std::istream& in, const CsvSchema& schema = {});
std::vector<ExamRecord> ingest_csv(const std::string& path, const CsvSchema& schema = {});

void write_exam_csv(std::ostream& out, const std::vector<ExamRecord>& records);

}  // namespace rankmatch
