#pragma once

// Conversions between the H x W (x C interleaved) raster types and the
// planar {C,H,W} graph tensors.

#include "sdd/graph.hpp"
#include "sdd/types.hpp"

namespace sdd {

inline Var image_to_var(const Image& img) {
  std::vector<double> v(img.data.size());
  const int plane = img.height * img.width;
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j)
      for (int c = 0; c < img.channels; ++c)
        v[static_cast<std::size_t>(c) * plane + i * img.width + j] =
            img.at(i, j, c);
  return Var::constant(Shape{img.channels, img.height, img.width},
                       std::move(v));
}

inline Image var_to_image(const Var& t) {
  const int c = t.shape()[0], h = t.shape()[1], w = t.shape()[2];
  Image img(h, w, c);
  const int plane = h * w;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      for (int ch = 0; ch < c; ++ch)
        img.at(i, j, ch) =
            t.value()[static_cast<std::size_t>(ch) * plane + i * w + j];
  return img;
}

inline Var disparity_to_var(const DisparityMap& d) {
  return Var::constant(Shape{1, d.height, d.width}, d.data);
}

inline Var mask_to_var(const OcclusionMask& m) {
  return Var::constant(Shape{1, m.height, m.width}, m.data);
}

inline DisparityMap var_to_disparity(const Var& t) {
  DisparityMap d(t.shape()[1], t.shape()[2]);
  d.data = t.value();
  return d;
}

inline OcclusionMask var_to_mask(const Var& t) {
  OcclusionMask m(t.shape()[1], t.shape()[2]);
  m.data = t.value();
  return m;
}

}  // namespace sdd
