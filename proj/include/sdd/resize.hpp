#pragma once

#include "sdd/types.hpp"

namespace sdd {

// Bilinear resize, top-left anchored: source coordinate = dest / scale,
// edge-clamped. Output dims are max(1, round(dim * scale)).
Image resize_bilinear(const Image& img, double scale);

// Disparity values are additionally multiplied by `scale` when is_disparity
// is set, so stereo correspondences survive the resize.
DisparityMap resize_bilinear(const DisparityMap& map, double scale,
                             bool is_disparity = true);

}  // namespace sdd
