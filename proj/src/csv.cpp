#include "tunnel/csv.hpp"

#include <cmath>
#include <cstdio>

namespace tunnel {

std::string fmt_num(double value) {
  if (std::isnan(value)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", value == 0.0 ? 0.0 : value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const Params& params,
                     const std::vector<std::string>& columns)
    : out_(out) {
  out_ << "# " << kToolVersion << '\n';
  for (const auto& [key, value] : params) out_ << "# " << key << '=' << value << '\n';
  row(columns);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

}  // namespace tunnel
