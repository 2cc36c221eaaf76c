// Copyright (c) 2026 The textkernel Authors. All Rights Reserved.
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

#include "json.hpp"
#include "textkernel/centerline.hpp"
#include "textkernel/evaluation.hpp"
#include "textkernel/geometry.hpp"
#include "textkernel/metrics.hpp"
#include "textkernel/raster.hpp"
#include "textkernel/synthetic.hpp"

namespace textkernel::io {

using Json = nlohmann::json;

// Parse failures and schema violations throw Error(kInvalidInput); file
// failures throw Error(kIo).
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& value);

Json to_json(const geometry::Polygon& poly);
geometry::Polygon polygon_from_json(const Json& j);

// {"min_r": f, "points": [{"x": f, "y": f, "r": f}, ...]}
Json to_json(const centerline::CenterLine& line);
centerline::CenterLine centerline_from_json(const Json& j);

// {"page": id, "gt": [{"poly": [[x, y], ...], "text": "..."}], "pred": [...]}
Json to_json(const eval::PageRecord& page);
eval::PageRecord page_from_json(const Json& j);
// Accepts a single page object or an array of them.
std::vector<eval::PageRecord> pages_from_json(const Json& j);

Json to_json(const eval::EvalReport& report);
std::string report_table(const eval::EvalReport& report);

struct SynthPageSpec {
  std::string page = "synth";
  double pitch = 0.0;  // 0 picks a pitch that keeps strips apart
  std::vector<synth::StripSpec> strips;
};

Json to_json(const synth::StripSpec& spec);
synth::StripSpec strip_spec_from_json(const Json& j);
SynthPageSpec synth_page_spec_from_json(const Json& j);

// {"symbol": class_index, ...}
metrics::ClassMap class_map_from_json(const Json& j);

// Raw little-endian float32 samples in (y, x, channel) order, plus a JSON
// sidecar {"height", "width", "channels"} at `path` with ".json" appended.
void write_float_raster(const std::filesystem::path& path, const raster::Raster& image);
raster::Raster read_float_raster(const std::filesystem::path& path);

}  // namespace textkernel::io
