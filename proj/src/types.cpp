#include "sdd/types.hpp"

#include <cmath>
#include <string>

namespace sdd {

namespace {

std::string loc(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

void validate(const Image& img) {
  if (img.channels != 1 && img.channels != 3)
    throw ShapeError("Image: channels must be 1 or 3, got " +
                     std::to_string(img.channels));
  if (img.data.size() !=
      static_cast<std::size_t>(img.height) * img.width * img.channels)
    throw ShapeError("Image: data length does not match height*width*channels");
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < img.channels; ++c) {
        const double v = img.at(i, j, c);
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
          throw ShapeError("Image: value " + std::to_string(v) +
                           " outside [0,1] at " + loc(i, j));
      }
}

void validate(const DisparityMap& d) {
  if (d.data.size() != static_cast<std::size_t>(d.height) * d.width)
    throw ShapeError("DisparityMap: data length does not match height*width");
  for (int i = 0; i < d.height; ++i)
    for (int j = 0; j < d.width; ++j) {
      const double v = d.at(i, j);
      if (!std::isfinite(v))
        throw ShapeError("DisparityMap: non-finite value at " + loc(i, j));
      if (v < 0.0 || v >= d.width)
        throw ShapeError("DisparityMap: value " + std::to_string(v) +
                         " outside [0,width) at " + loc(i, j));
    }
}

void validate(const OcclusionMask& m, bool ground_truth) {
  if (m.data.size() != static_cast<std::size_t>(m.height) * m.width)
    throw ShapeError("OcclusionMask: data length does not match height*width");
  for (int i = 0; i < m.height; ++i)
    for (int j = 0; j < m.width; ++j) {
      const double v = m.at(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ShapeError("OcclusionMask: value outside [0,1] at " + loc(i, j));
      if (ground_truth && v != 0.0 && v != 1.0)
        throw ShapeError("OcclusionMask: ground-truth value not in {0,1} at " +
                         loc(i, j));
    }
}

void validate(const CameraRig& rig) {
  if (!(rig.baseline_m > 0.0) || !(rig.focal_px > 0.0))
    throw ShapeError("CameraRig: baseline and focal length must be positive");
}

}  // namespace sdd
