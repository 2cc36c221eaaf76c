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

#include "textkernel/common.hpp"

namespace textkernel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kEmptyMask: return "EmptyMask";
    case ErrorKind::kEmptyRegion: return "EmptyRegion";
    case ErrorKind::kDegeneratePolygon: return "DegeneratePolygon";
    case ErrorKind::kZeroPerimeter: return "ZeroPerimeter";
    case ErrorKind::kSingularSystem: return "SingularSystem";
    case ErrorKind::kDegenerateLine: return "DegenerateLine";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kInfeasibleLength: return "InfeasibleLength";
    case ErrorKind::kEmptyReference: return "EmptyReference";
    case ErrorKind::kNoGroundTruth: return "NoGroundTruth";
    case ErrorKind::kSpecOutOfBounds: return "SpecOutOfBounds";
    case ErrorKind::kOverlapDetected: return "OverlapDetected";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace textkernel
