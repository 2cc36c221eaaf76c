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

#include <cstdint>
#include <filesystem>
#include <vector>

#include "textkernel/raster.hpp"

namespace textkernel::io {

// Gray images are 8-bit, values 0..255 carried as float in a 1-channel Raster.
// Masks read from either format are thresholded at 128.

raster::Raster read_gray(const std::filesystem::path& path);
raster::BinaryMask read_mask(const std::filesystem::path& path);

// Format chosen by extension: .pgm (P5) or .png. Values are rounded and
// clamped to 0..255; masks are written as 0 / 255.
void write_gray(const std::filesystem::path& path, const raster::Raster& image);
void write_mask(const std::filesystem::path& path, const raster::BinaryMask& mask);

// 8-bit RGB, interleaved, PNG only.
void write_rgb_png(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& rgb);

raster::BinaryMask threshold(const raster::Raster& gray, float level = 128.0f);

}  // namespace textkernel::io
