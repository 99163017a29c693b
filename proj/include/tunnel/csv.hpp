#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tunnel {

inline constexpr const char* kToolVersion = "tunnelsim 1.0.0";

/// Fixed-format number rendering shared by all CSV output ("%.10g").
std::string fmt_num(double value);

/// CSV writer with a '#'-prefixed provenance block ahead of the header row.
class CsvWriter {
 public:
  using Params = std::vector<std::pair<std::string, std::string>>;

  CsvWriter(std::ostream& out, const Params& params, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void comment(std::string_view text);

 private:
  std::ostream& out_;
};

}  // namespace tunnel
