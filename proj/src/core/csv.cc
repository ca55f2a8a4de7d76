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

#include "core/csv.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

#include "core/error.h"

namespace dpbayes {
namespace {

bool ParseNumber(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {
  Require(!header_.empty(), ErrorCode::kInvalidArgument, "empty CSV header");
}

void CsvTable::AddRow(std::vector<std::string> row) {
  Require(row.size() == header_.size(), ErrorCode::kInternal,
          "CSV row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::SortByLeadingColumns(int columns) {
  const std::size_t count =
      std::min<std::size_t>(std::max(columns, 0), header_.size());
  std::stable_sort(rows_.begin(), rows_.end(),
                   [count](const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
                     for (std::size_t c = 0; c < count; ++c) {
                       double x;
                       double y;
                       if (ParseNumber(a[c], x) && ParseNumber(b[c], y)) {
                         if (x != y) return x < y;
                       } else if (a[c] != b[c]) {
                         return a[c] < b[c];
                       }
                     }
                     return false;
                   });
}

std::string CsvTable::ToString() const {
  std::string out;
  auto append = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append(header_);
  for (const auto& row : rows_) append(row);
  return out;
}

}  // namespace dpbayes
