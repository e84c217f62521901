#pragma once

#include "sdd/rng.hpp"
#include "sdd/scenegen.hpp"
#include "sdd/types.hpp"

namespace sdd {

enum class AugmentPolicy {
  StereoFull,       // flip-swap, resize [0.8,1.2], crop, photometric jitter
  MonoPhotometric,  // flip-swap + photometric jitter only
  None,
};

struct AugmentDraw {
  bool flip_swap = false;
  double scale = 1.0;
  int crop_y = 0, crop_x = 0;
  int crop_h = 0, crop_w = 0;  // 0 = no crop
  double gamma = 1.0;
  double brightness = 1.0;
  double color[3] = {1.0, 1.0, 1.0};
};

// Draw order is fixed so streams are reproducible.
AugmentDraw draw_augment(Rng& rng, AugmentPolicy policy, int in_h, int in_w,
                         int crop_h, int crop_w);

// Applies flip-swap -> resize -> crop -> gamma/brightness/color.
// Any geometric change re-deduces occ_left from the transformed disparity
// pair via the left-right consistency check (the same deduction the paper
// uses for ground-truth masks); a pure photometric draw passes occ through.
StereoSample apply_augment(const StereoSample& sample, const AugmentDraw& d);

StereoSample augment_stereo(const StereoSample& sample, Rng& rng,
                            AugmentPolicy policy, int crop_h, int crop_w);

// building blocks, used directly by tests
StereoSample flip_swap(const StereoSample& sample);
Image apply_photometric(const Image& img, double gamma, double brightness,
                        const double color[3]);

}  // namespace sdd
