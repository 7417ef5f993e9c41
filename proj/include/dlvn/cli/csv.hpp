// Copyright 2026 The dlvn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// CSV output. Floats use the shortest round-trip form; nulls are empty.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "dlvn/analysis.hpp"
#include "dlvn/format.hpp"

namespace dlvn::cli {

inline constexpr std::string_view kCsvHeader =
    "param_name,param_value,method,current,error_estimate,diag_panels,diag_residual,error";
inline constexpr std::string_view kConvergenceExtraHeader =
    ",gamma,spacing_over_gamma,landauer_current,landauer_abs_err,landauer_rel_err";

/// RFC 4180 quoting when the field needs it.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string cell_error(const SweepCell& cell) {
  if (!cell.failed()) return {};
  return cell.error_category + ": " + cell.error;
}

/// One data row without the trailing newline.
inline std::string csv_row(std::string_view param_name, const std::optional<double>& param_value,
                           const SweepCell& cell) {
  std::ostringstream out;
  out << csv_field(param_name) << ',' << format_optional(param_value) << ',' << to_string(cell.method) << ','
      << format_optional(cell.value) << ',' << format_optional(cell.error_estimate) << ','
      << format_optional(cell.panels) << ',' << format_optional(cell.residual) << ',' << csv_field(cell_error(cell));
  return out.str();
}

/// Writes `text` with every line prefixed by "# ".
inline void write_comment_block(std::ostream& out, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out << "# " << line << '\n';
}

/// Inverse of write_comment_block over the leading comment lines of a CSV.
inline std::string extract_comment_block(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line) && line.rfind("# ", 0) == 0) out += line.substr(2) + '\n';
  return out;
}

}  // namespace dlvn::cli
