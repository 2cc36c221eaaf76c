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

#include "textkernel/json_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace textkernel::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::kInvalidInput, what); }

// Runs a schema accessor, turning library exceptions into InvalidInput.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

std::string text_of(const std::vector<metrics::Symbol>& symbols) { return metrics::utf8_encode(symbols); }

}  // namespace

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

Json to_json(const geometry::Polygon& poly) {
  Json arr = Json::array();
  for (const auto& p : poly.vertices) arr.push_back({p.x, p.y});
  return arr;
}

geometry::Polygon polygon_from_json(const Json& j) {
  if (!j.is_array()) bad("polygon must be an array of [x, y] pairs");
  geometry::Polygon poly;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad("polygon vertex must be [x, y]");
    poly.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return poly;
}

Json to_json(const centerline::CenterLine& line) {
  Json pts = Json::array();
  for (const auto& p : line.points) pts.push_back({{"x", p.position.x}, {"y", p.position.y}, {"r", p.radius}});
  return {{"min_r", line.min_r}, {"points", pts}};
}

centerline::CenterLine centerline_from_json(const Json& j) {
  if (!j.is_object()) bad("center line must be an object");
  centerline::CenterLine line;
  line.min_r = number(j, "min_r");
  if (!j.contains("points") || !j.at("points").is_array()) bad("center line needs a 'points' array");
  for (const auto& p : j.at("points")) {
    if (!p.is_object()) bad("center point must be an object");
    line.points.push_back({{number(p, "x"), number(p, "y")}, number(p, "r")});
  }
  return line;
}

namespace {

std::vector<eval::TextBox> boxes_from_json(const Json& j, const char* key) {
  std::vector<eval::TextBox> out;
  if (!j.contains(key)) return out;
  if (!j.at(key).is_array()) bad(std::string("'") + key + "' must be an array");
  for (const auto& b : j.at(key)) {
    if (!b.is_object() || !b.contains("poly")) bad(std::string("entries of '") + key + "' need a 'poly'");
    eval::TextBox box;
    box.poly = polygon_from_json(b.at("poly"));
    if (b.contains("text")) {
      if (!b.at("text").is_string()) bad("'text' must be a string");
      box.text = metrics::utf8_symbols(b.at("text").get<std::string>());
    }
    out.push_back(std::move(box));
  }
  return out;
}

Json boxes_to_json(const std::vector<eval::TextBox>& boxes) {
  Json arr = Json::array();
  for (const auto& b : boxes) arr.push_back({{"poly", to_json(b.poly)}, {"text", text_of(b.text)}});
  return arr;
}

}  // namespace

Json to_json(const eval::PageRecord& page) {
  return {{"page", page.id}, {"gt", boxes_to_json(page.gt)}, {"pred", boxes_to_json(page.pred)}};
}

eval::PageRecord page_from_json(const Json& j) {
  if (!j.is_object()) bad("page must be an object");
  eval::PageRecord page;
  if (j.contains("page")) {
    const auto& id = j.at("page");
    page.id = id.is_string() ? id.get<std::string>() : id.dump();
  }
  page.gt = boxes_from_json(j, "gt");
  page.pred = boxes_from_json(j, "pred");
  return page;
}

std::vector<eval::PageRecord> pages_from_json(const Json& j) {
  std::vector<eval::PageRecord> pages;
  if (j.is_array()) {
    for (const auto& p : j) pages.push_back(page_from_json(p));
  } else {
    pages.push_back(page_from_json(j));
  }
  return pages;
}

Json to_json(const eval::EvalReport& report) {
  Json pages = Json::array();
  for (const auto& p : report.pages) {
    pages.push_back({{"page", p.id},
                     {"gt_lines", p.gt_lines},
                     {"detected", p.detected},
                     {"matched_lines", p.matched_lines},
                     {"unmatched_boxes", p.unmatched_boxes},
                     {"substitutions", p.edits.substitutions},
                     {"deletions", p.edits.deletions},
                     {"insertions", p.edits.insertions},
                     {"reference_length", p.edits.reference_length}});
  }
  return {{"precision", report.detection.precision},
          {"recall", report.detection.recall},
          {"f_measure", report.detection.f_measure},
          {"cr", report.cr},
          {"ar", report.ar},
          {"pages", pages}};
}

std::string report_table(const eval::EvalReport& report) {
  std::ostringstream os;
  std::size_t id_width = 4;
  for (const auto& p : report.pages) id_width = std::max(id_width, p.id.size());
  const int w = static_cast<int>(id_width);
  os << std::left << std::setw(w) << "page" << std::right << std::setw(8) << "gt" << std::setw(8) << "tp"
     << std::setw(10) << "unmatched" << std::setw(6) << "S" << std::setw(6) << "D" << std::setw(6) << "I"
     << std::setw(8) << "N" << '\n';
  for (const auto& p : report.pages) {
    os << std::left << std::setw(w) << p.id << std::right << std::setw(8) << p.gt_lines << std::setw(8) << p.detected
       << std::setw(10) << p.unmatched_boxes << std::setw(6) << p.edits.substitutions << std::setw(6)
       << p.edits.deletions << std::setw(6) << p.edits.insertions << std::setw(8) << p.edits.reference_length << '\n';
  }
  os << std::fixed << std::setprecision(4);
  os << "precision " << report.detection.precision << '\n';
  os << "recall    " << report.detection.recall << '\n';
  os << "f_measure " << report.detection.f_measure << '\n';
  os << "cr        " << report.cr << '\n';
  os << "ar        " << report.ar << '\n';
  return os.str();
}

namespace {

const char* texture_name(synth::TextureKind k) {
  switch (k) {
    case synth::TextureKind::kConstant: return "constant";
    case synth::TextureKind::kVerticalBars: return "bars";
    case synth::TextureKind::kChecker: return "checker";
  }
  return "constant";
}

}  // namespace

Json to_json(const synth::StripSpec& spec) {
  return {{"length", spec.length},
          {"half_height", spec.half_height},
          {"amplitude", spec.amplitude},
          {"period", spec.period},
          {"rotation", spec.rotation_deg},
          {"texture", {{"kind", texture_name(spec.texture.kind)}, {"bar_width", spec.texture.bar_width}}},
          {"text", spec.text}};
}

synth::StripSpec strip_spec_from_json(const Json& j) {
  if (!j.is_object()) bad("strip spec must be an object");
  synth::StripSpec s;
  return guarded("strip spec", [&] {
    s.length = j.value("length", s.length);
    s.half_height = j.value("half_height", s.half_height);
    s.amplitude = j.value("amplitude", s.amplitude);
    s.period = j.value("period", s.period);
    s.rotation_deg = j.value("rotation", s.rotation_deg);
    s.text = j.value("text", s.text);
    if (j.contains("texture")) {
      const auto& t = j.at("texture");
      const std::string kind = t.is_string() ? t.get<std::string>() : t.value("kind", std::string("constant"));
      if (kind == "constant") {
        s.texture.kind = synth::TextureKind::kConstant;
      } else if (kind == "bars") {
        s.texture.kind = synth::TextureKind::kVerticalBars;
      } else if (kind == "checker") {
        s.texture.kind = synth::TextureKind::kChecker;
      } else {
        bad("unknown texture kind '" + kind + "'");
      }
      if (t.is_object()) s.texture.bar_width = t.value("bar_width", s.texture.bar_width);
    }
    s.validate();
    return s;
  });
}

SynthPageSpec synth_page_spec_from_json(const Json& j) {
  if (!j.is_object()) bad("synth spec must be an object");
  SynthPageSpec spec;
  return guarded("synth spec", [&] {
    if (j.contains("page")) spec.page = j.at("page").is_string() ? j.at("page").get<std::string>() : j.at("page").dump();
    spec.pitch = j.value("pitch", 0.0);
    if (!j.contains("strips") || !j.at("strips").is_array()) bad("synth spec needs a 'strips' array");
    for (const auto& s : j.at("strips")) spec.strips.push_back(strip_spec_from_json(s));
    return spec;
  });
}

metrics::ClassMap class_map_from_json(const Json& j) {
  if (!j.is_object()) bad("class map must be an object");
  metrics::ClassMap map;
  for (const auto& [symbol, index] : j.items()) {
    if (!index.is_number_integer()) bad("class index for '" + symbol + "' must be an integer");
    map.emplace(symbol, index.get<metrics::Symbol>());
  }
  return map;
}

namespace {

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto s = path;
  s += ".json";
  return s;
}

}  // namespace

void write_float_raster(const std::filesystem::path& path, const raster::Raster& image) {
  static_assert(std::endian::native == std::endian::little, "float files are written little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(image.data.data()),
            static_cast<std::streamsize>(image.data.size() * sizeof(float)));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
  write_json(sidecar(path), {{"height", image.height}, {"width", image.width}, {"channels", image.channels}});
}

raster::Raster read_float_raster(const std::filesystem::path& path) {
  const Json meta = read_json(sidecar(path));
  const int h = static_cast<int>(number(meta, "height"));
  const int w = static_cast<int>(number(meta, "width"));
  const int c = static_cast<int>(number(meta, "channels"));
  if (w < 1 || h < 1 || c < 1) bad("float raster sidecar has non-positive dimensions");
  raster::Raster image(w, h, c);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  in.read(reinterpret_cast<char*>(image.data.data()), static_cast<std::streamsize>(image.data.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(image.data.size() * sizeof(float))) {
    bad(path.string() + " is shorter than its sidecar declares");
  }
  return image;
}

}  // namespace textkernel::io
