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

#include "readout/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "readout/errors.hpp"

namespace readout {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson metadata_json(const BundleMetadata& m) {
  OrderedJson j = OrderedJson::object();
  j["tool_version"] = m.tool_version;
  j["scenario"] = m.scenario;
  j["config_hash"] = m.config_hash;
  j["master_seed"] = m.master_seed;
  j["wall_time_s"] = m.wall_time_s;
  j["warnings"] = m.warnings;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += ',';
      out += format_value(table.values[c][r]);
    }
    out += '\n';
  }
  return out;
}

std::string metadata_to_json(const BundleMetadata& metadata) { return metadata_json(metadata).dump(2) + "\n"; }

std::string bundle_to_json(const ResultBundle& bundle) {
  OrderedJson doc = OrderedJson::object();
  OrderedJson tables = OrderedJson::object();
  for (const auto& t : bundle.tables) {
    OrderedJson cols = OrderedJson::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      OrderedJson values = OrderedJson::array();
      for (double v : t.values[c]) {
        if (std::isfinite(v))
          values.push_back(v);
        else
          values.push_back(nullptr);  // JSON has no nan or inf
      }
      cols[t.columns[c]] = std::move(values);
    }
    tables[t.name] = std::move(cols);
  }
  doc["tables"] = std::move(tables);
  doc["metadata"] = metadata_json(bundle.metadata);
  return doc.dump(2) + "\n";
}

ResultBundle bundle_from_json(const std::string& text) {
  OrderedJson doc;
  try {
    doc = OrderedJson::parse(text);
  } catch (const OrderedJson::parse_error& e) {
    throw ConfigError(std::string("result bundle is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tables") || !doc.contains("metadata"))
    throw ConfigError("result bundle needs 'tables' and 'metadata'");
  ResultBundle bundle;
  try {
    for (const auto& [name, cols] : doc["tables"].items()) {
      Table t;
      t.name = name;
      for (const auto& [col, values] : cols.items()) {
        t.columns.push_back(col);
        std::vector<double> column;
        for (const auto& v : values)
          column.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        t.values.push_back(std::move(column));
      }
      bundle.tables.push_back(std::move(t));
    }
    const auto& m = doc["metadata"];
    bundle.metadata.tool_version = m.at("tool_version").get<std::string>();
    bundle.metadata.scenario = m.at("scenario").get<std::string>();
    bundle.metadata.config_hash = m.at("config_hash").get<std::string>();
    bundle.metadata.master_seed = m.at("master_seed").get<std::uint64_t>();
    bundle.metadata.wall_time_s = m.at("wall_time_s").get<double>();
    bundle.metadata.warnings = m.at("warnings").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed result bundle: ") + e.what());
  }
  return bundle;
}

std::vector<std::filesystem::path> emit(const ResultBundle& bundle, OutputFormat format,
                                        const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::csv) {
    for (const auto& t : bundle.tables) {
      written.push_back(dir / (t.name + ".csv"));
      write_file(written.back(), table_to_csv(t));
    }
    written.push_back(dir / "metadata.json");
    write_file(written.back(), metadata_to_json(bundle.metadata));
  } else {
    written.push_back(dir / "results.json");
    write_file(written.back(), bundle_to_json(bundle));
  }
  return written;
}

}  // namespace readout
