// Copyright 2026 The readout-sim Authors
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

#ifndef READOUT_EMIT_HPP
#define READOUT_EMIT_HPP

// Writing result bundles. CSV output is one <table>.csv per table (header
// row, every value as %.17e, nan for missing) plus metadata.json; JSON
// output is a single results.json with "tables" and "metadata".

#include <filesystem>
#include <string>
#include <vector>

#include "readout/config.hpp"
#include "readout/scenarios.hpp"

namespace readout {

std::string format_value(double v);
std::string table_to_csv(const Table& table);
std::string metadata_to_json(const BundleMetadata& metadata);
std::string bundle_to_json(const ResultBundle& bundle);
ResultBundle bundle_from_json(const std::string& text);

/// Writes the bundle under `dir` (created if missing) and returns the files written.
std::vector<std::filesystem::path> emit(const ResultBundle& bundle, OutputFormat format,
                                        const std::filesystem::path& dir);

}  // namespace readout

#endif  // READOUT_EMIT_HPP
