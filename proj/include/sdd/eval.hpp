#pragma once

#include "sdd/types.hpp"

namespace sdd {

struct DepthMetrics {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rms = 0.0;
  double log_rms = 0.0;
  double delta1 = 0.0;  // fraction with max(d/d*, d*/d) < 1.25
  double delta2 = 0.0;  // < 1.25^2
  double delta3 = 0.0;  // < 1.25^3
  long long valid_count = 0;
};

struct DisparityMetrics {
  double mae_px = 0.0;
  double bad1_frac = 0.0;  // fraction with |err| > 1 px
  double bad3_frac = 0.0;  // fraction with |err| > 3 px
};

struct MetricsReport {
  DepthMetrics depth;
  DisparityMetrics disparity;
};

// depth = baseline * focal / disparity; disparities <= eps_d map to the cap
// instead of dividing.
using DepthMap = DisparityMap;  // same storage, values in meters
DepthMap disparity_to_depth(const DisparityMap& disp, const CameraRig& rig,
                            double cap_m = 80.0, double eps_d = 1e-3);
DisparityMap depth_to_disparity(const DepthMap& depth, const CameraRig& rig);

// Pixels evaluate when valid_mask is 1 AND gt in (min_depth, cap];
// predictions are clamped into [min_depth, cap]. Throws when no pixel
// qualifies.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           const OcclusionMask& valid_mask, double cap_m,
                           double min_depth = 1e-3);

DisparityMetrics disparity_metrics(const DisparityMap& pred,
                                   const DisparityMap& gt);

// mean |pred - gt| over pixels where region == region_value (0 = occluded)
double disparity_mae_in_region(const DisparityMap& pred,
                               const DisparityMap& gt,
                               const OcclusionMask& region,
                               double region_value);

}  // namespace sdd
