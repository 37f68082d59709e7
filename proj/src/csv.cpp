// Copyright 2026 The itnctl Authors
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

#include "itnctl/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "itnctl/config.hpp"
#include "itnctl/errors.hpp"

namespace itnctl {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_csv(const Trajectory<StateVec>& x, const ControlGrid& u, const Trajectory<AdjointVec>& l,
               const std::filesystem::path& path) {
  if (!(x.grid == u.grid()) || !(x.grid == l.grid) || x.size() != l.size()) {
    throw std::invalid_argument("write_csv: trajectories and control use different grids");
  }
  auto out = open_for_write(path);
  out << kTrajectoryHeader << '\n';
  std::string row;
  for (std::size_t i = 0; i < x.size(); ++i) {
    row.clear();
    row += format_double(x.grid.time(i));
    for (double v : x[i].components()) row += ',' + format_double(v);
    row += ',' + format_double(u[i]);
    for (double v : l[i].components()) row += ',' + format_double(v);
    out << row << '\n';
  }
  finish(out, path);
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return columns[k];
  }
  throw MissingArtifact("CSV has no column '" + name + "'");
}

void write_table(const CsvTable& table, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
  out << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      out << (k ? "," : "") << format_double(table.columns[k][r]);
    }
    out << '\n';
  }
  finish(out, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("missing CSV artifact " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw MissingArtifact("CSV artifact " + path.string() + " has no header");
  }
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  table.columns.resize(table.header.size());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::size_t k = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      const auto end = comma == std::string::npos ? line.size() : comma;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + start, line.data() + end, v);
      if (res.ec != std::errc() || res.ptr != line.data() + end || k >= table.columns.size()) {
        throw ParseError("malformed CSV cell in " + path.string(), line_no, static_cast<int>(start) + 1);
      }
      table.columns[k++].push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (k != table.columns.size()) {
      throw ParseError("short CSV row in " + path.string(), line_no, 1);
    }
  }
  if (table.rows() == 0) throw MissingArtifact("CSV artifact " + path.string() + " has no data rows");
  return table;
}

}  // namespace itnctl
