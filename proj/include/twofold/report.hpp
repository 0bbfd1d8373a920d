// Copyright 2026 The Twofold Authors.
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

// Minimal CSV / markdown table writer shared by the harnesses.

#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace twofold::report {

enum class Format { Csv, Markdown };

inline std::string_view to_string(Format f) noexcept { return f == Format::Csv ? "csv" : "md"; }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write(std::ostream& os, Format f) const {
    if (f == Format::Csv) {
      write_line(os, header, ",", "", "");
      for (const auto& r : rows) write_line(os, r, ",", "", "");
      return;
    }
    write_line(os, header, " | ", "| ", " |");
    std::vector<std::string> rule(header.size(), "---");
    write_line(os, rule, " | ", "| ", " |");
    for (const auto& r : rows) write_line(os, r, " | ", "| ", " |");
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells, std::string_view sep,
                         std::string_view open, std::string_view close) {
    os << open;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << sep;
      os << cells[i];
    }
    os << close << '\n';
  }
};

// printf-style formatting of one double; locale independent for %g/%e.
inline std::string fmt(double v, const char* spec = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace twofold::report
