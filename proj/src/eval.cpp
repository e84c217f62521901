#include "sdd/eval.hpp"

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

DepthMap disparity_to_depth(const DisparityMap& disp, const CameraRig& rig,
                            double cap_m, double eps_d) {
  validate(rig);
  const double bf = rig.baseline_m * rig.focal_px;
  DepthMap depth(disp.height, disp.width);
  for (std::size_t k = 0; k < disp.data.size(); ++k) {
    const double d = disp.data[k];
    depth.data[k] = d <= eps_d ? cap_m : bf / d;
  }
  return depth;
}

DisparityMap depth_to_disparity(const DepthMap& depth, const CameraRig& rig) {
  validate(rig);
  const double bf = rig.baseline_m * rig.focal_px;
  DisparityMap disp(depth.height, depth.width);
  for (std::size_t k = 0; k < depth.data.size(); ++k)
    disp.data[k] = depth.data[k] > 0.0 ? bf / depth.data[k] : 0.0;
  return disp;
}

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt,
                           const OcclusionMask& valid_mask, double cap_m,
                           double min_depth) {
  check_dims(pred.height, pred.width, gt.height, gt.width, "depth_metrics");
  check_dims(pred.height, pred.width, valid_mask.height, valid_mask.width,
             "depth_metrics(mask)");

  double abs_rel = 0.0, sq_rel = 0.0, sq = 0.0, log_sq = 0.0;
  long long n = 0, d1 = 0, d2 = 0, d3 = 0;
  for (int i = 0; i < pred.height; ++i)
    for (int j = 0; j < pred.width; ++j) {
      if (valid_mask.at(i, j) == 0.0) continue;
      const double g = gt.at(i, j);
      if (!(g > min_depth) || g > cap_m) continue;
      double p = pred.at(i, j);
      if (p < min_depth) p = min_depth;
      if (p > cap_m) p = cap_m;

      const double err = p - g;
      abs_rel += std::abs(err) / g;
      sq_rel += err * err / g;
      sq += err * err;
      const double log_err = std::log(p) - std::log(g);
      log_sq += log_err * log_err;
      const double ratio = p > g ? p / g : g / p;
      if (ratio < 1.25) ++d1;
      if (ratio < 1.25 * 1.25) ++d2;
      if (ratio < 1.25 * 1.25 * 1.25) ++d3;
      ++n;
    }
  if (n == 0)
    throw NumericError("depth_metrics: no valid pixels under the cap");

  DepthMetrics m;
  const double inv_n = 1.0 / static_cast<double>(n);
  m.abs_rel = abs_rel * inv_n;
  m.sq_rel = sq_rel * inv_n;
  m.rms = std::sqrt(sq * inv_n);
  m.log_rms = std::sqrt(log_sq * inv_n);
  m.delta1 = d1 * inv_n;
  m.delta2 = d2 * inv_n;
  m.delta3 = d3 * inv_n;
  m.valid_count = n;
  return m;
}

DisparityMetrics disparity_metrics(const DisparityMap& pred,
                                   const DisparityMap& gt) {
  check_dims(pred.height, pred.width, gt.height, gt.width,
             "disparity_metrics");
  double mae = 0.0;
  long long bad1 = 0, bad3 = 0;
  const std::size_t n = pred.data.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double err = std::abs(pred.data[k] - gt.data[k]);
    mae += err;
    if (err > 1.0) ++bad1;
    if (err > 3.0) ++bad3;
  }
  DisparityMetrics m;
  m.mae_px = mae / static_cast<double>(n);
  m.bad1_frac = static_cast<double>(bad1) / static_cast<double>(n);
  m.bad3_frac = static_cast<double>(bad3) / static_cast<double>(n);
  return m;
}

double disparity_mae_in_region(const DisparityMap& pred,
                               const DisparityMap& gt,
                               const OcclusionMask& region,
                               double region_value) {
  check_dims(pred.height, pred.width, gt.height, gt.width,
             "disparity_mae_in_region");
  double mae = 0.0;
  long long n = 0;
  for (int i = 0; i < pred.height; ++i)
    for (int j = 0; j < pred.width; ++j) {
      if (region.at(i, j) != region_value) continue;
      mae += std::abs(pred.at(i, j) - gt.at(i, j));
      ++n;
    }
  if (n == 0) throw NumericError("disparity_mae_in_region: empty region");
  return mae / static_cast<double>(n);
}

}  // namespace sdd
