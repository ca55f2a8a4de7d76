//
// Copyright 2026 The dpbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPBAYES_CORE_CSV_H_
#define DPBAYES_CORE_CSV_H_

#include <string>
#include <vector>

namespace dpbayes {

// 17 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string FormatDouble(double value);

// Comma-separated table with LF line endings. Cells are written verbatim, so
// callers must not put commas in them.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void AddRow(std::vector<std::string> row);
  // Stable sort on the first `columns` columns; cells that both parse as
  // numbers compare numerically, others lexicographically.
  void SortByLeadingColumns(int columns);
  std::string ToString() const;

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dpbayes

#endif  // DPBAYES_CORE_CSV_H_
