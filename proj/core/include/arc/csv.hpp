// Copyright 2026 The ARC Authors.
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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace arc::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;

  // Index of a header column, or -1.
  int column(const std::string& name) const;
};

std::string escape(const std::string& cell);
void write_row(std::ostream& out, const Row& row);
void write(const std::filesystem::path& path, const Table& table);

// RFC 4180 subset: quoted cells, doubled quotes, no embedded newlines.
Table read(const std::filesystem::path& path);
Row parse_line(const std::string& line);

}  // namespace arc::csv
