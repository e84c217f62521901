#pragma once

#include <cstddef>
#include <vector>

#include "sdd/errors.hpp"

namespace sdd {

// Raster conventions used throughout:
//   - Image: H x W x C, row-major, channel-interleaved, intensities in [0,1].
//   - DisparityMap / OcclusionMask: H x W, row-major.
//   - Disparity follows the left-view convention: the pixel (i,j) of the left
//     image corresponds to (i, j - d(i,j)) in the right image.

struct Image {
  int height = 0;
  int width = 0;
  int channels = 0;  // 1 or 3
  std::vector<double> data;

  Image() = default;
  Image(int h, int w, int c, double fill = 0.0)
      : height(h), width(w), channels(c),
        data(static_cast<std::size_t>(h) * w * c, fill) {}

  double& at(int i, int j, int c) {
    return data[(static_cast<std::size_t>(i) * width + j) * channels + c];
  }
  double at(int i, int j, int c) const {
    return data[(static_cast<std::size_t>(i) * width + j) * channels + c];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width;
  }
};

struct DisparityMap {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  DisparityMap() = default;
  DisparityMap(int h, int w, double fill = 0.0)
      : height(h), width(w), data(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int i, int j) {
    return data[static_cast<std::size_t>(i) * width + j];
  }
  double at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * width + j];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width;
  }
};

// 0 = occluded, 1 = visible. Ground-truth masks hold exactly {0,1};
// network predictions may hold any value in [0,1].
struct OcclusionMask {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  OcclusionMask() = default;
  OcclusionMask(int h, int w, double fill = 1.0)
      : height(h), width(w), data(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int i, int j) {
    return data[static_cast<std::size_t>(i) * width + j];
  }
  double at(int i, int j) const {
    return data[static_cast<std::size_t>(i) * width + j];
  }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * width;
  }
};

struct CameraRig {
  double baseline_m = 0.0;
  double focal_px = 0.0;
};

// One pyramid level. Mono predictions leave `occ` empty.
struct ScalePrediction {
  DisparityMap disp;
  OcclusionMask occ;
};

// Scale m has resolution (H/2^m, W/2^m); scale 0 is full resolution.
struct PyramidPrediction {
  std::vector<ScalePrediction> scales;
  int scale_count() const { return static_cast<int>(scales.size()); }
};

void validate(const Image& img);          // finite, in [0,1], sizes consistent
void validate(const DisparityMap& d);     // finite, >= 0, < width
void validate(const OcclusionMask& m, bool ground_truth = false);
void validate(const CameraRig& rig);

}  // namespace sdd
