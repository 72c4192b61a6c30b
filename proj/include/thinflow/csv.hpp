#pragma once

#include <optional>
#include <string>
#include <vector>

namespace thinflow {

// Shortest decimal text that reads back to the same double; "nan", "inf",
// "-inf" for the non-finite values.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);  // empty -> "None"

bool parse_double(const std::string& text, double& out);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace thinflow
