#include "sdd/losses.hpp"

#include <cmath>
#include <string>

#include "sdd/tensor_bridge.hpp"

namespace sdd {

namespace {

void check_plane(const char* op, const Var& v) {
  if (v.shape().rank() != 3 || v.shape()[0] != 1)
    throw ShapeError(std::string(op) + ": expected {1,H,W}, got " +
                     v.shape().str());
}

double inv_pixels(const Var& v) {
  return 1.0 / (static_cast<double>(v.shape()[1]) * v.shape()[2]);
}

Var weighted_scalar_sum(const std::vector<Var>& terms,
                        const std::vector<double>& w) {
  Var total = mul_scalar(terms[0], w[0]);
  for (std::size_t m = 1; m < terms.size(); ++m)
    total = add(total, mul_scalar(terms[m], w[m]));
  return total;
}

}  // namespace

void validate(const LossWeights& w) {
  if (w.gamma1 < 0.0 || w.gamma2 < 0.0 || w.gamma3 < 0.0)
    throw ConfigError("LossWeights: gammas must be non-negative");
  for (double s : w.scale_weights)
    if (s < 0.0) throw ConfigError("LossWeights: scale weights must be >= 0");
}

Var disparity_l1(const Var& pred, const Var& target, const Var& valid) {
  check_plane("disparity_l1", pred);
  return mul_scalar(sum(mul(valid, vabs(sub(pred, target)))),
                    inv_pixels(pred));
}

Var disparity_l1(const Var& pred, const Var& target) {
  check_plane("disparity_l1", pred);
  return mul_scalar(sum(vabs(sub(pred, target))), inv_pixels(pred));
}

Var occlusion_bce(const Var& pred, const Var& target) {
  return bce(pred, target, 1e-7);
}

Var photometric_masked(const Var& left, const Var& right, const Var& disp,
                       const Var& mask) {
  check_plane("photometric_masked(disp)", disp);
  check_plane("photometric_masked(mask)", mask);
  const Var residual = channel_mean(vabs(sub(left, warp_horizontal(right, disp))));
  return mul_scalar(sum(mul(mask, residual)), inv_pixels(disp));
}

Var absolute_reg(const Var& disp, const Var& disp_un, const Var& mask_un,
                 double gamma3) {
  check_plane("absolute_reg", disp);
  if (gamma3 < 0.0) throw ConfigError("absolute_reg: gamma3 must be >= 0");
  // (1 - mask + g3) = (1 + g3) - mask
  const Var weight = add_scalar(mul_scalar(mask_un, -1.0), 1.0 + gamma3);
  return mul_scalar(sum(mul(weight, vabs(sub(disp, disp_un)))),
                    inv_pixels(disp));
}

Var relative_reg(const Var& disp, const Var& disp_un) {
  check_plane("relative_reg", disp);
  const Var gx = sum(vabs(sub(forward_diff_x(disp), forward_diff_x(disp_un))));
  const Var gy = sum(vabs(sub(forward_diff_y(disp), forward_diff_y(disp_un))));
  return mul_scalar(add(gx, gy), inv_pixels(disp));
}

Var unsup_ft_loss(const Var& left, const Var& right, const Var& disp_pred,
                  const Var& disp_un, const Var& mask_un,
                  const LossWeights& weights) {
  validate(weights);
  Var loss = photometric_masked(left, right, disp_pred, mask_un);
  loss = add(loss, mul_scalar(absolute_reg(disp_pred, disp_un, mask_un,
                                           weights.gamma3),
                              weights.gamma1));
  loss = add(loss,
             mul_scalar(relative_reg(disp_pred, disp_un), weights.gamma2));
  return loss;
}

Var stereo_sup_loss(const std::vector<Var>& pred_disp,
                    const std::vector<Var>& pred_occ,
                    const std::vector<Var>& gt_disp,
                    const std::vector<Var>& gt_occ,
                    const LossWeights& weights) {
  validate(weights);
  const std::size_t scales = pred_disp.size();
  if (pred_occ.size() != scales || gt_disp.size() != scales ||
      gt_occ.size() != scales || weights.scale_weights.size() < scales)
    throw ShapeError("stereo_sup_loss: scale count mismatch");
  std::vector<Var> per_scale;
  per_scale.reserve(scales);
  for (std::size_t m = 0; m < scales; ++m)
    per_scale.push_back(add(disparity_l1(pred_disp[m], gt_disp[m]),
                            occlusion_bce(pred_occ[m], gt_occ[m])));
  return weighted_scalar_sum(per_scale, weights.scale_weights);
}

Var distill_loss(const std::vector<Var>& mono_disp,
                 const std::vector<Var>& teacher_disp,
                 const LossWeights& weights) {
  validate(weights);
  const std::size_t scales = mono_disp.size();
  if (teacher_disp.size() != scales || weights.scale_weights.size() < scales)
    throw ShapeError("distill_loss: scale count mismatch");
  std::vector<Var> per_scale;
  per_scale.reserve(scales);
  for (std::size_t m = 0; m < scales; ++m)
    per_scale.push_back(disparity_l1(mono_disp[m], teacher_disp[m]));
  return weighted_scalar_sum(per_scale, weights.scale_weights);
}

// ------------------------------------------------------- raster conveniences

double disparity_l1(const DisparityMap& pred, const DisparityMap& target,
                    const OcclusionMask* valid) {
  const Var p = disparity_to_var(pred);
  const Var t = disparity_to_var(target);
  if (valid) return disparity_l1(p, t, mask_to_var(*valid)).scalar();
  return disparity_l1(p, t).scalar();
}

double occlusion_bce(const OcclusionMask& pred, const OcclusionMask& target) {
  return occlusion_bce(mask_to_var(pred), mask_to_var(target)).scalar();
}

double photometric_masked(const Image& left, const Image& right,
                          const DisparityMap& disp,
                          const OcclusionMask& mask) {
  return photometric_masked(image_to_var(left), image_to_var(right),
                            disparity_to_var(disp), mask_to_var(mask))
      .scalar();
}

double absolute_reg(const DisparityMap& disp, const DisparityMap& disp_un,
                    const OcclusionMask& mask_un, double gamma3) {
  return absolute_reg(disparity_to_var(disp), disparity_to_var(disp_un),
                      mask_to_var(mask_un), gamma3)
      .scalar();
}

double relative_reg(const DisparityMap& disp, const DisparityMap& disp_un) {
  return relative_reg(disparity_to_var(disp), disparity_to_var(disp_un))
      .scalar();
}

double unsup_ft_loss(const Image& left, const Image& right,
                     const DisparityMap& disp_pred,
                     const DisparityMap& disp_un, const OcclusionMask& mask_un,
                     const LossWeights& weights) {
  return unsup_ft_loss(image_to_var(left), image_to_var(right),
                       disparity_to_var(disp_pred), disparity_to_var(disp_un),
                       mask_to_var(mask_un), weights)
      .scalar();
}

namespace {

std::vector<Var> disp_vars(const PyramidPrediction& p) {
  std::vector<Var> out;
  out.reserve(p.scales.size());
  for (const auto& s : p.scales) out.push_back(disparity_to_var(s.disp));
  return out;
}

std::vector<Var> occ_vars(const PyramidPrediction& p) {
  std::vector<Var> out;
  out.reserve(p.scales.size());
  for (const auto& s : p.scales) out.push_back(mask_to_var(s.occ));
  return out;
}

}  // namespace

double stereo_sup_loss(const PyramidPrediction& pred,
                       const PyramidPrediction& gt,
                       const LossWeights& weights) {
  return stereo_sup_loss(disp_vars(pred), occ_vars(pred), disp_vars(gt),
                         occ_vars(gt), weights)
      .scalar();
}

double distill_loss(const PyramidPrediction& mono,
                    const PyramidPrediction& teacher,
                    const LossWeights& weights) {
  return distill_loss(disp_vars(mono), disp_vars(teacher), weights).scalar();
}

// ---------------------------------------------------------------- pyramids

namespace {

void check_even(int h, int w, const char* op) {
  if (h % 2 != 0 || w % 2 != 0)
    throw ShapeError(std::string(op) + ": dims must be even, got " +
                     std::to_string(h) + "x" + std::to_string(w));
}

}  // namespace

DisparityMap avg_pool2_disparity(const DisparityMap& d) {
  check_even(d.height, d.width, "avg_pool2_disparity");
  DisparityMap out(d.height / 2, d.width / 2);
  for (int i = 0; i < out.height; ++i)
    for (int j = 0; j < out.width; ++j)
      out.at(i, j) = 0.5 * 0.25 *
                     (d.at(2 * i, 2 * j) + d.at(2 * i, 2 * j + 1) +
                      d.at(2 * i + 1, 2 * j) + d.at(2 * i + 1, 2 * j + 1));
  return out;
}

Image avg_pool2(const Image& img) {
  check_even(img.height, img.width, "avg_pool2");
  Image out(img.height / 2, img.width / 2, img.channels);
  for (int i = 0; i < out.height; ++i)
    for (int j = 0; j < out.width; ++j)
      for (int c = 0; c < img.channels; ++c)
        out.at(i, j, c) =
            0.25 * (img.at(2 * i, 2 * j, c) + img.at(2 * i, 2 * j + 1, c) +
                    img.at(2 * i + 1, 2 * j, c) +
                    img.at(2 * i + 1, 2 * j + 1, c));
  return out;
}

OcclusionMask nearest_down2(const OcclusionMask& m) {
  check_even(m.height, m.width, "nearest_down2");
  OcclusionMask out(m.height / 2, m.width / 2);
  for (int i = 0; i < out.height; ++i)
    for (int j = 0; j < out.width; ++j) out.at(i, j) = m.at(2 * i, 2 * j);
  return out;
}

std::vector<DisparityMap> disparity_pyramid(const DisparityMap& d,
                                            int scales) {
  std::vector<DisparityMap> pyr{d};
  for (int m = 1; m < scales; ++m)
    pyr.push_back(avg_pool2_disparity(pyr.back()));
  return pyr;
}

std::vector<OcclusionMask> mask_pyramid(const OcclusionMask& m, int scales) {
  std::vector<OcclusionMask> pyr{m};
  for (int k = 1; k < scales; ++k) pyr.push_back(nearest_down2(pyr.back()));
  return pyr;
}

std::vector<Image> image_pyramid(const Image& img, int scales) {
  std::vector<Image> pyr{img};
  for (int k = 1; k < scales; ++k) pyr.push_back(avg_pool2(pyr.back()));
  return pyr;
}

PyramidPrediction gt_pyramid(const DisparityMap& disp,
                             const OcclusionMask& occ, int scales) {
  PyramidPrediction pyr;
  auto dp = disparity_pyramid(disp, scales);
  auto mp = mask_pyramid(occ, scales);
  pyr.scales.resize(scales);
  for (int m = 0; m < scales; ++m) {
    pyr.scales[m].disp = std::move(dp[m]);
    pyr.scales[m].occ = std::move(mp[m]);
  }
  return pyr;
}

}  // namespace sdd
