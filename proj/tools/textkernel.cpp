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

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "textkernel/centerline.hpp"
#include "textkernel/evaluation.hpp"
#include "textkernel/geometry.hpp"
#include "textkernel/image_io.hpp"
#include "textkernel/json_io.hpp"
#include "textkernel/overlay.hpp"
#include "textkernel/pipeline.hpp"
#include "textkernel/raster.hpp"
#include "textkernel/synthetic.hpp"
#include "textkernel/tps.hpp"

namespace fs = std::filesystem;
using namespace textkernel;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("textkernel");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TEXTKERNEL_LOG")) {
    const std::string level(env);
    if (level == "error" || level == "warn" || level == "info" || level == "debug") {
      spdlog::set_level(spdlog::level::from_str(level));
    } else {
      spdlog::warn("ignoring TEXTKERNEL_LOG={} (expected error, warn, info or debug)", level);
    }
  }
}

void require_file(const fs::path& p) {
  if (!fs::is_regular_file(p)) throw Error(ErrorKind::kIo, "no such file: " + p.string());
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create directory " + p.string() + ": " + ec.message());
}

bool is_float_path(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".f32" || ext == ".bin" || ext == ".raw";
}

void write_strip(const fs::path& path, const raster::Raster& strip) {
  if (is_float_path(path)) {
    io::write_float_raster(path, strip);
  } else {
    io::write_gray(path, strip);
  }
}

std::pair<int, int> parse_canvas(const std::string& s) {
  const auto x = s.find('x');
  int w = 0, h = 0;
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    w = std::stoi(s.substr(0, x));
    h = std::stoi(s.substr(x + 1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInvalidInput, "canvas must look like WIDTHxHEIGHT, got '" + s + "'");
  }
  if (w < 1 || h < 1) throw Error(ErrorKind::kInvalidInput, "canvas dimensions must be positive");
  return {w, h};
}

// Canvas just large enough for every vertex.
std::pair<int, int> canvas_for(const std::vector<geometry::Polygon>& polys) {
  double w = 1.0, h = 1.0;
  for (const auto& p : polys) {
    w = std::max(w, p.max_x());
    h = std::max(h, p.max_y());
  }
  return {static_cast<int>(std::ceil(w)), static_cast<int>(std::ceil(h))};
}

struct Common {
  double r = 0.6;
  int height = tps::kDefaultStripHeight;
  double suppress_mult = centerline::kDefaultSuppressMultiplier;
  double iou_grid = 1.0;
  double amp_v = 0.2;
  double amp_h = 1.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool downscale4 = false;

  pipeline::PipelineConfig config() const {
    pipeline::PipelineConfig c;
    c.shrink_ratio = r;
    c.strip_height = height;
    c.suppress_mult = suppress_mult;
    c.iou_cell = iou_grid;
    c.amp_v = amp_v;
    c.amp_h = amp_h;
    c.seed = seed;
    c.jobs = jobs;
    c.downscale4 = downscale4;
    c.validate();
    return c;
  }
};

void add_r(CLI::App* app, Common& c) {
  app->add_option("--r", c.r, "shrink ratio r in (0, 1]; kernels are clipped by d = A(1 - r^2)/L")
      ->capture_default_str();
}
void add_height(CLI::App* app, Common& c) {
  app->add_option("--height", c.height, "rectified strip height in pixels")->capture_default_str();
}
void add_mult(CLI::App* app, Common& c) {
  app->add_option("--suppress-mult", c.suppress_mult, "center suppression radius as a multiple of min_r")
      ->capture_default_str();
}
void add_iou(CLI::App* app, Common& c) {
  app->add_option("--iou-grid", c.iou_grid, "cell size of the IOU sampling grid in pixels")->capture_default_str();
}
void add_jobs(CLI::App* app, Common& c) {
  app->add_option("--jobs", c.jobs, "worker threads; output does not depend on this")->capture_default_str();
}
void add_perturb(CLI::App* app, Common& c) {
  app->add_option("--amp-v", c.amp_v, "vertical perturbation amplitude (fraction of the box short side)")
      ->capture_default_str();
  app->add_option("--amp-h", c.amp_h, "horizontal perturbation amplitude (fraction of the box short side)")
      ->capture_default_str();
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
}

// --- centerline ----------------------------------------------------------

struct CenterlineArgs {
  fs::path mask, out, overlay;
};

void run_centerline(const CenterlineArgs& a, const Common& c) {
  require_file(a.mask);
  const auto cfg = c.config();
  const auto mask = io::read_mask(a.mask);
  if (mask.empty_foreground()) throw Error(ErrorKind::kEmptyMask, a.mask.string() + " has no foreground");
  const auto spots = pipeline::spot_page(mask, raster::Raster(mask.width(), mask.height(), 1), cfg);

  io::Json out;
  if (spots.lines.size() == 1) {
    out = io::to_json(spots.lines.front().line);
  } else {
    out = io::Json::array();
    for (const auto& s : spots.lines) out.push_back(io::to_json(s.line));
  }
  if (a.out.empty()) {
    std::cout << out.dump(2) << '\n';
  } else {
    io::write_json(a.out, out);
  }
  if (!a.overlay.empty()) {
    overlay::Canvas canvas(mask);
    for (const auto& s : spots.lines) overlay::draw_centerline(canvas, s.line);
    canvas.save_png(a.overlay);
  }
}

// --- rectify -------------------------------------------------------------

struct RectifyArgs {
  fs::path image, centerline, out;
};

void run_rectify(const RectifyArgs& a, const Common& c) {
  require_file(a.image);
  require_file(a.centerline);
  const auto cfg = c.config();
  const auto image = io::read_gray(a.image);
  const auto line = io::centerline_from_json(io::read_json(a.centerline));
  write_strip(a.out, tps::rectify_strip(image, line, cfg.strip_height));
}

// --- shrink --------------------------------------------------------------

struct ShrinkArgs {
  fs::path page, out;
  std::string canvas;
  bool perturb = false;
};

void run_shrink(const ShrinkArgs& a, const Common& c) {
  require_file(a.page);
  const auto cfg = c.config();
  const auto page = io::page_from_json(io::read_json(a.page));
  std::vector<geometry::Polygon> boxes;
  for (std::size_t i = 0; i < page.gt.size(); ++i) {
    auto box = page.gt[i].poly;
    if (a.perturb) box = eval::perturb_box(box, cfg.amp_v, cfg.amp_h, cfg.seed + i);
    boxes.push_back(std::move(box));
  }
  const auto [w, h] = a.canvas.empty() ? canvas_for(boxes) : parse_canvas(a.canvas);
  io::write_mask(a.out, pipeline::make_kernel_labels(boxes, w, h, cfg));
}

// --- evaluate ------------------------------------------------------------

struct EvaluateArgs {
  fs::path pages, out;
  bool normalize = false;
};

void run_evaluate(const EvaluateArgs& a, const Common& c) {
  require_file(a.pages);
  const auto cfg = c.config();
  const auto pages = io::pages_from_json(io::read_json(a.pages));
  eval::EvalOptions opt;
  opt.iou_cell = cfg.iou_cell;
  opt.jobs = cfg.jobs;
  opt.normalize_symbols = a.normalize;
  const auto report = eval::evaluate(pages, opt);
  if (!a.out.empty()) io::write_json(a.out, io::to_json(report));
  std::cout << io::report_table(report);
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  fs::path spec, out_dir;
};

void run_synth(const SynthArgs& a) {
  require_file(a.spec);
  const auto spec = io::synth_page_spec_from_json(io::read_json(a.spec));
  double pitch = spec.pitch;
  if (pitch <= 0.0) {
    // Tallest strip canvas plus a gap.
    for (const auto& s : spec.strips) {
      const auto r = synth::render_strip(s);
      pitch = std::max(pitch, static_cast<double>(r.mask.height()) + 4.0);
    }
  }
  const auto page = synth::render_page(spec.strips, pitch);
  ensure_dir(a.out_dir);
  io::write_mask(a.out_dir / "mask.png", page.mask);
  io::write_gray(a.out_dir / "image.png", page.image);

  eval::PageRecord gt;
  gt.id = spec.page;
  io::Json centerlines = io::Json::array();
  for (const auto& s : page.strips) {
    gt.gt.push_back({s.gt_box, metrics::utf8_symbols(s.text)});
    io::Json pts = io::Json::array();
    for (const auto& p : s.centerline) pts.push_back({p.x, p.y});
    centerlines.push_back({{"half_height", s.half_height}, {"points", pts}});
  }
  io::write_json(a.out_dir / "gt.json", io::to_json(gt));
  io::write_json(a.out_dir / "centerlines.json", centerlines);
  spdlog::info("rendered {} strips into {}", page.strips.size(), a.out_dir.string());
}

// --- spot ----------------------------------------------------------------

struct SpotArgs {
  fs::path mask, image, out_dir, overlay, transcripts_from;
  std::string page_id = "spot";
};

void run_spot(const SpotArgs& a, const Common& c) {
  require_file(a.mask);
  require_file(a.image);
  if (!a.transcripts_from.empty()) require_file(a.transcripts_from);
  const auto cfg = c.config();
  const auto mask = io::read_mask(a.mask);
  const auto image = io::read_gray(a.image);
  const auto result = pipeline::spot_page(mask, image, cfg);

  std::optional<eval::PageRecord> reference;
  if (!a.transcripts_from.empty()) reference = io::page_from_json(io::read_json(a.transcripts_from));

  ensure_dir(a.out_dir);
  eval::PageRecord page;
  page.id = reference ? reference->id : a.page_id;
  if (reference) page.gt = reference->gt;
  io::Json lines = io::Json::array();
  for (std::size_t i = 0; i < result.lines.size(); ++i) {
    const auto& s = result.lines[i];
    char name[32];
    std::snprintf(name, sizeof name, "strip_%03zu.png", i);
    io::write_gray(a.out_dir / name, s.strip);

    eval::TextBox box{s.box, {}};
    // Stand-in recognizer: copy the transcript of the best-overlapping reference line.
    if (reference) {
      double best = 0.0;
      for (const auto& g : reference->gt) {
        const double iou = geometry::polygon_iou(s.box, g.poly, cfg.iou_cell);
        if (iou > best) {
          best = iou;
          box.text = g.text;
        }
      }
    }
    page.pred.push_back(std::move(box));
    io::Json entry = io::to_json(s.line);
    entry["spine"] = io::to_json(s.spine)["points"];
    entry["strip"] = name;
    entry["area"] = s.area;
    lines.push_back(std::move(entry));
  }
  io::Json skipped = io::Json::array();
  for (const auto& s : result.skipped) {
    skipped.push_back({{"area", s.area}, {"poly", io::to_json(s.box)}, {"reason", s.reason}});
  }
  io::write_json(a.out_dir / "page.json", io::to_json(page));
  io::write_json(a.out_dir / "lines.json", {{"lines", lines}, {"skipped", skipped}});

  if (!a.overlay.empty()) {
    overlay::Canvas canvas(image);
    for (const auto& s : result.lines) {
      overlay::draw_tps_grid(canvas, tps::rectification_warp(s.spine, cfg.strip_height));
      canvas.polygon(s.box, overlay::kBoxColor);
      overlay::draw_centerline(canvas, s.line);
    }
    canvas.save_png(a.overlay);
  }
  std::cout << result.lines.size() << " lines, " << result.skipped.size() << " skipped\n";
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Text-kernel post-processing: center lines, rectification, kernels and evaluation"};
  app.require_subcommand(1);
  app.footer("Set TEXTKERNEL_LOG to error, warn, info or debug to control logging.");
  Common common;

  CenterlineArgs cl;
  auto* cmd_cl = app.add_subcommand("centerline", "mask -> center line JSON (one object, or an array for several components)");
  cmd_cl->add_option("mask", cl.mask, "binary mask (PGM or PNG)")->required();
  cmd_cl->add_option("-o,--out", cl.out, "output JSON (default: stdout)");
  cmd_cl->add_option("--overlay", cl.overlay, "write an RGB PNG with circles and spines");
  add_mult(cmd_cl, common);
  add_r(cmd_cl, common);
  add_height(cmd_cl, common);

  RectifyArgs rc;
  auto* cmd_rc = app.add_subcommand("rectify", "image + center line -> rectified strip");
  cmd_rc->add_option("image", rc.image, "grayscale image (PGM or PNG)")->required();
  cmd_rc->add_option("centerline", rc.centerline, "center line JSON")->required();
  cmd_rc->add_option("-o,--out", rc.out, "output strip: .png/.pgm, or .f32/.bin for raw floats with a .json sidecar")
      ->required();
  add_height(cmd_rc, common);
  add_r(cmd_rc, common);
  add_mult(cmd_rc, common);

  ShrinkArgs sh;
  auto* cmd_sh = app.add_subcommand("shrink", "gt page JSON -> kernel label mask");
  cmd_sh->add_option("page", sh.page, "page JSON; its gt boxes are shrunk")->required();
  cmd_sh->add_option("-o,--out", sh.out, "output mask (.pgm or .png)")->required();
  cmd_sh->add_option("--canvas", sh.canvas, "mask size WIDTHxHEIGHT (default: fit the boxes)");
  cmd_sh->add_flag("--perturb", sh.perturb, "jitter each box with --amp-v/--amp-h before shrinking (box i uses seed + i)");
  add_r(cmd_sh, common);
  add_perturb(cmd_sh, common);
  add_height(cmd_sh, common);
  add_mult(cmd_sh, common);

  EvaluateArgs ev;
  auto* cmd_ev = app.add_subcommand("evaluate", "pages JSON -> precision / recall / F-measure / CR / AR");
  cmd_ev->add_option("pages", ev.pages, "one page object or an array of pages")->required();
  cmd_ev->add_option("-o,--out", ev.out, "write the report as JSON");
  cmd_ev->add_flag("--normalize", ev.normalize, "fold full-width forms onto ASCII before scoring");
  add_iou(cmd_ev, common);
  add_jobs(cmd_ev, common);
  add_r(cmd_ev, common);
  add_height(cmd_ev, common);
  add_mult(cmd_ev, common);

  SynthArgs sy;
  auto* cmd_sy = app.add_subcommand("synth", "strip spec JSON -> mask.png, image.png, gt.json, centerlines.json");
  cmd_sy->add_option("spec", sy.spec, "synthetic page spec JSON")->required();
  cmd_sy->add_option("-o,--out-dir", sy.out_dir, "output directory")->required();
  add_r(cmd_sy, common);
  add_height(cmd_sy, common);
  add_mult(cmd_sy, common);

  SpotArgs sp;
  auto* cmd_sp = app.add_subcommand("spot", "mask + image -> per-line strips, boxes and center lines");
  cmd_sp->add_option("mask", sp.mask, "kernel mask (PGM or PNG)")->required();
  cmd_sp->add_option("image", sp.image, "grayscale page image (PGM or PNG)")->required();
  cmd_sp->add_option("-o,--out-dir", sp.out_dir, "output directory")->required();
  cmd_sp->add_option("--overlay", sp.overlay, "write an RGB PNG with circles, boxes and the TPS grid");
  cmd_sp->add_option("--transcripts-from", sp.transcripts_from,
                     "page JSON whose gt texts are copied to the best-overlapping spotted line");
  cmd_sp->add_flag("--downscale4", common.downscale4, "run on a 4x downscaled mask and image");
  add_height(cmd_sp, common);
  add_mult(cmd_sp, common);
  add_r(cmd_sp, common);
  add_iou(cmd_sp, common);
  add_jobs(cmd_sp, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << app.help();
    return 1;
  }

  try {
    if (*cmd_cl) run_centerline(cl, common);
    if (*cmd_rc) run_rectify(rc, common);
    if (*cmd_sh) run_shrink(sh, common);
    if (*cmd_ev) run_evaluate(ev, common);
    if (*cmd_sy) run_synth(sy);
    if (*cmd_sp) run_spot(sp, common);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return 2;
  }
  return 0;
}
