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

#include "gwdm/data/spatial.h"

#include "gwdm/core/errors.h"

namespace gwdm {

SpatialVec EncodeSpatial(const BBox& bbox, int image_width, int image_height) {
  if (image_width <= 0 || image_height <= 0) {
    throw ArgumentError("image size must be positive");
  }
  const double w = image_width;
  const double h = image_height;
  const double x_min = 2.0 * bbox.x / w - 1.0;
  const double y_min = 2.0 * bbox.y / h - 1.0;
  const double x_max = 2.0 * (bbox.x + bbox.w) / w - 1.0;
  const double y_max = 2.0 * (bbox.y + bbox.h) / h - 1.0;
  return {static_cast<float>(x_min),
          static_cast<float>(y_min),
          static_cast<float>(x_max),
          static_cast<float>(y_max),
          static_cast<float>((x_min + x_max) / 2.0),
          static_cast<float>((y_min + y_max) / 2.0),
          static_cast<float>(2.0 * bbox.w / w),
          static_cast<float>(2.0 * bbox.h / h)};
}

}  // namespace gwdm
