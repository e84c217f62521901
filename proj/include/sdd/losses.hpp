#pragma once

#include <vector>

#include "sdd/graph.hpp"
#include "sdd/types.hpp"

namespace sdd {

// All losses normalize by the TOTAL pixel count N = H*W, even where a mask
// zeroes out pixels; masks scale the loss magnitude rather than the mean.
// Reductions accumulate in row-major order, so values are bit-reproducible.

struct LossWeights {
  double gamma1 = 0.05;
  double gamma2 = 0.1;
  double gamma3 = 0.1;
  std::vector<double> scale_weights;  // w_m, default 2^-m

  static LossWeights defaults(int scales) {
    LossWeights w;
    w.scale_weights.resize(scales);
    for (int m = 0; m < scales; ++m) w.scale_weights[m] = std::pow(2.0, -m);
    return w;
  }
};

void validate(const LossWeights& w);

// ----- graph-level losses (pred and targets may be any Vars {1,H,W}) -----

// (1/N) * sum valid * |pred - target|
Var disparity_l1(const Var& pred, const Var& target, const Var& valid);
// L1 over an all-ones valid mask.
Var disparity_l1(const Var& pred, const Var& target);

// -(1/N) * sum [ t*log(p) + (1-t)*log(1-p) ], p clamped to [eps, 1-eps]
Var occlusion_bce(const Var& pred, const Var& target);

// (1/N) * sum mask * mean_c |left - warp(right, disp)|
Var photometric_masked(const Var& left, const Var& right, const Var& disp,
                       const Var& mask);

// (1/N) * sum (1 - mask_un + gamma3) * |disp - disp_un|
Var absolute_reg(const Var& disp, const Var& disp_un, const Var& mask_un,
                 double gamma3);

// (1/N) * sum |dx disp - dx disp_un| + |dy disp - dy disp_un|
Var relative_reg(const Var& disp, const Var& disp_un);

// photometric + gamma1*absolute + gamma2*relative (single scale)
Var unsup_ft_loss(const Var& left, const Var& right, const Var& disp_pred,
                  const Var& disp_un, const Var& mask_un,
                  const LossWeights& weights);

// sum_m w_m * (disparity_l1 + occlusion_bce) over pyramid scales
Var stereo_sup_loss(const std::vector<Var>& pred_disp,
                    const std::vector<Var>& pred_occ,
                    const std::vector<Var>& gt_disp,
                    const std::vector<Var>& gt_occ,
                    const LossWeights& weights);

// sum_m w_m * (1/N_m) * sum |mono - teacher| (no mask)
Var distill_loss(const std::vector<Var>& mono_disp,
                 const std::vector<Var>& teacher_disp,
                 const LossWeights& weights);

// ----- raster conveniences (forward value only) -----

double disparity_l1(const DisparityMap& pred, const DisparityMap& target,
                    const OcclusionMask* valid = nullptr);
double occlusion_bce(const OcclusionMask& pred, const OcclusionMask& target);
double photometric_masked(const Image& left, const Image& right,
                          const DisparityMap& disp, const OcclusionMask& mask);
double absolute_reg(const DisparityMap& disp, const DisparityMap& disp_un,
                    const OcclusionMask& mask_un, double gamma3);
double relative_reg(const DisparityMap& disp, const DisparityMap& disp_un);
double unsup_ft_loss(const Image& left, const Image& right,
                     const DisparityMap& disp_pred,
                     const DisparityMap& disp_un, const OcclusionMask& mask_un,
                     const LossWeights& weights);
double stereo_sup_loss(const PyramidPrediction& pred,
                       const PyramidPrediction& gt,
                       const LossWeights& weights);
double distill_loss(const PyramidPrediction& mono,
                    const PyramidPrediction& teacher,
                    const LossWeights& weights);

// ----- pyramid construction (ground-truth side) -----

// 2x2 average pooling; disparity values additionally halved so they stay in
// the coarser scale's pixel units. Dims must be even.
DisparityMap avg_pool2_disparity(const DisparityMap& d);
Image avg_pool2(const Image& img);
// nearest-neighbor 2x downsampling keeps masks in {0,1}
OcclusionMask nearest_down2(const OcclusionMask& m);

// scale 0 = input resolution, M entries
std::vector<DisparityMap> disparity_pyramid(const DisparityMap& d, int scales);
std::vector<OcclusionMask> mask_pyramid(const OcclusionMask& m, int scales);
std::vector<Image> image_pyramid(const Image& img, int scales);

PyramidPrediction gt_pyramid(const DisparityMap& disp,
                             const OcclusionMask& occ, int scales);

}  // namespace sdd
