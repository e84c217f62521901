#include "sdd/geometry.hpp"

#include <cmath>
#include <string>

namespace sdd {

namespace {

void check_dims(int ah, int aw, int bh, int bw, const char* op) {
  if (ah != bh || aw != bw)
    throw ShapeError(std::string(op) + ": dimension mismatch " +
                     std::to_string(ah) + "x" + std::to_string(aw) + " vs " +
                     std::to_string(bh) + "x" + std::to_string(bw));
}

}  // namespace

Image warp_right_to_left(const Image& right, const DisparityMap& disp_left) {
  check_dims(right.height, right.width, disp_left.height, disp_left.width,
             "warp_right_to_left");
  Image out(right.height, right.width, right.channels);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < right.height; ++i) {
    for (int j = 0; j < right.width; ++j) {
      const HorizTaps t = horiz_taps(j - disp_left.at(i, j), right.width);
      for (int c = 0; c < right.channels; ++c) {
        out.at(i, j, c) = (1.0 - t.frac) * right.at(i, t.lo, c) +
                          t.frac * right.at(i, t.hi, c);
      }
    }
  }
  return out;
}

DisparityMap warp_map_right_to_left(const DisparityMap& right_map,
                                    const DisparityMap& disp_left) {
  check_dims(right_map.height, right_map.width, disp_left.height,
             disp_left.width, "warp_map_right_to_left");
  DisparityMap out(right_map.height, right_map.width);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < right_map.height; ++i) {
    for (int j = 0; j < right_map.width; ++j) {
      const HorizTaps t = horiz_taps(j - disp_left.at(i, j), right_map.width);
      out.at(i, j) = (1.0 - t.frac) * right_map.at(i, t.lo) +
                     t.frac * right_map.at(i, t.hi);
    }
  }
  return out;
}

OcclusionMask occlusion_mask_lr_check(const DisparityMap& disp_left,
                                      const DisparityMap& disp_right,
                                      double threshold) {
  check_dims(disp_left.height, disp_left.width, disp_right.height,
             disp_right.width, "occlusion_mask_lr_check");
  if (threshold < 0.0)
    throw ShapeError("occlusion_mask_lr_check: negative threshold");

  OcclusionMask mask(disp_left.height, disp_left.width);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < disp_left.height; ++i) {
    for (int j = 0; j < disp_left.width; ++j) {
      const double dl = disp_left.at(i, j);
      const double x = j - dl;
      if (x < 0.0 || x > disp_left.width - 1.0) {
        mask.at(i, j) = 0.0;  // no correspondence inside the frame
        continue;
      }
      const HorizTaps t = horiz_taps(x, disp_left.width);
      const double warped = (1.0 - t.frac) * disp_right.at(i, t.lo) +
                            t.frac * disp_right.at(i, t.hi);
      mask.at(i, j) = std::abs(dl - warped) <= threshold ? 1.0 : 0.0;
    }
  }
  return mask;
}

}  // namespace sdd
