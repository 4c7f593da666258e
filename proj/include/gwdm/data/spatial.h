// Copyright 2026 The GuessWhat-DM Authors
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

#ifndef GWDM_DATA_SPATIAL_H_
#define GWDM_DATA_SPATIAL_H_

#include <array>

#include "gwdm/data/game.h"

namespace gwdm {

inline constexpr int kSpatialDim = 8;

// [x_min, y_min, x_max, y_max, x_center, y_center, w_box, h_box], with
// coordinates mapped to [-1, 1] and sizes to (0, 2].
using SpatialVec = std::array<float, kSpatialDim>;

SpatialVec EncodeSpatial(const BBox& bbox, int image_width, int image_height);

}  // namespace gwdm

#endif  // GWDM_DATA_SPATIAL_H_
