#include "sdd/resize.hpp"

#include <cmath>
#include <stdexcept>

namespace sdd {

namespace {

int scaled_dim(int dim, double scale) {
  const int out = static_cast<int>(std::llround(dim * scale));
  return out < 1 ? 1 : out;
}

struct Taps {
  int lo, hi;
  double frac;
};

inline Taps taps_for(int dst, double scale, int src_size) {
  double x = dst / scale;
  if (x < 0.0) x = 0.0;
  const double max_x = static_cast<double>(src_size - 1);
  if (x > max_x) x = max_x;
  const int lo = static_cast<int>(x);
  const int hi = lo + 1 < src_size ? lo + 1 : src_size - 1;
  return {lo, hi, x - lo};
}

void check_scale(double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("resize_bilinear: scale must be positive");
}

}  // namespace

Image resize_bilinear(const Image& img, double scale) {
  check_scale(scale);
  const int oh = scaled_dim(img.height, scale);
  const int ow = scaled_dim(img.width, scale);
  Image out(oh, ow, img.channels);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < oh; ++i) {
    const Taps ty = taps_for(i, scale, img.height);
    for (int j = 0; j < ow; ++j) {
      const Taps tx = taps_for(j, scale, img.width);
      for (int c = 0; c < img.channels; ++c) {
        const double top = (1.0 - tx.frac) * img.at(ty.lo, tx.lo, c) +
                           tx.frac * img.at(ty.lo, tx.hi, c);
        const double bot = (1.0 - tx.frac) * img.at(ty.hi, tx.lo, c) +
                           tx.frac * img.at(ty.hi, tx.hi, c);
        out.at(i, j, c) = (1.0 - ty.frac) * top + ty.frac * bot;
      }
    }
  }
  return out;
}

DisparityMap resize_bilinear(const DisparityMap& map, double scale,
                             bool is_disparity) {
  check_scale(scale);
  const int oh = scaled_dim(map.height, scale);
  const int ow = scaled_dim(map.width, scale);
  const double value_scale = is_disparity ? scale : 1.0;
  DisparityMap out(oh, ow);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < oh; ++i) {
    const Taps ty = taps_for(i, scale, map.height);
    for (int j = 0; j < ow; ++j) {
      const Taps tx = taps_for(j, scale, map.width);
      const double top = (1.0 - tx.frac) * map.at(ty.lo, tx.lo) +
                         tx.frac * map.at(ty.lo, tx.hi);
      const double bot = (1.0 - tx.frac) * map.at(ty.hi, tx.lo) +
                         tx.frac * map.at(ty.hi, tx.hi);
      out.at(i, j) = value_scale * ((1.0 - ty.frac) * top + ty.frac * bot);
    }
  }
  return out;
}

}  // namespace sdd
