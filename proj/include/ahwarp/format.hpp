#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ahwarp {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Comma-separated rows with a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace ahwarp
