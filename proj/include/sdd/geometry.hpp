#pragma once

#include "sdd/types.hpp"

namespace sdd {

// Horizontal bilinear sample helper shared by warping code. The sampling
// coordinate is clamped to [0, width-1]; rows are never resampled
// (rectified inputs).
struct HorizTaps {
  int lo, hi;
  double frac;
};

inline HorizTaps horiz_taps(double x, int width) {
  if (x < 0.0) x = 0.0;
  const double max_x = static_cast<double>(width - 1);
  if (x > max_x) x = max_x;
  const int lo = static_cast<int>(x);
  const int hi = lo + 1 < width ? lo + 1 : width - 1;
  return {lo, hi, x - lo};
}

// output(i,j) = bilinear sample of `right` at (i, j - disp_left(i,j)).
Image warp_right_to_left(const Image& right, const DisparityMap& disp_left);

// Same warp applied to a scalar map (used to warp the right disparity map).
DisparityMap warp_map_right_to_left(const DisparityMap& right_map,
                                    const DisparityMap& disp_left);

// Left-right consistency check: mask(i,j) = 1 iff
// |disp_left(i,j) - disp_right(i, j - disp_left(i,j))| <= threshold.
// Correspondences falling outside the image are marked occluded.
OcclusionMask occlusion_mask_lr_check(const DisparityMap& disp_left,
                                      const DisparityMap& disp_right,
                                      double threshold = 1.0);

}  // namespace sdd
