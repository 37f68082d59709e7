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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "itnctl/grid.hpp"
#include "itnctl/integrator.hpp"

namespace itnctl {

/// Column header of every trajectory CSV.
inline constexpr const char* kTrajectoryHeader = "t,S_h,I_h,S_v,I_v,u,lambda1,lambda2,lambda3,lambda4";

/// Writes one row per grid node with round-trip precision. Throws IoError
/// (with the path) if the file cannot be written, std::invalid_argument if
/// the inputs use different grids.
void write_csv(const Trajectory<StateVec>& x, const ControlGrid& u, const Trajectory<AdjointVec>& l,
               const std::filesystem::path& path);

/// Column-oriented numeric table.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Throws MissingArtifact if the column does not exist.
  const std::vector<double>& column(const std::string& name) const;
};

/// Writes a header line and the columns side by side.
void write_table(const CsvTable& table, const std::filesystem::path& path);

/// Reads a numeric CSV with a header line. Throws MissingArtifact if the file
/// is absent or has no data rows, ParseError on a malformed cell.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace itnctl
