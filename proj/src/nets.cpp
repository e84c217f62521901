#include "sdd/nets.hpp"

#include <cmath>

#include "sdd/rng.hpp"
#include "sdd/tensor_bridge.hpp"

namespace sdd {

namespace {

void add_conv(std::vector<NamedTensor>& out, const std::string& name, int oc,
              int ic) {
  out.push_back({name + "_w", {oc, ic, 3, 3}, {}});
  out.push_back({name + "_b", {oc}, {}});
}

void add_deconv(std::vector<NamedTensor>& out, const std::string& name, int ic,
                int oc) {
  out.push_back({name + "_w", {ic, oc, 4, 4}, {}});
  out.push_back({name + "_b", {oc}, {}});
}

double activation_std(const Var& v) {
  const auto& x = v.value();
  double m = 0.0;
  for (double a : x) m += a;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double a : x) s += (a - m) * (a - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

void record(ActivationTrace* trace, const char* name, const Var& v) {
  if (trace) trace->emplace_back(name, activation_std(v));
}

struct ParamCursor {
  const std::vector<Var>& params;
  const ArchDescriptor& arch;
  std::size_t next = 0;

  std::pair<Var, Var> take(const char* what) {
    if (next + 2 > params.size())
      throw ShapeError(std::string("net forward: missing parameters for ") +
                       what);
    Var w = params[next++];
    Var b = params[next++];
    return {w, b};
  }
};

void check_input_dims(const ArchDescriptor& arch, const Var& img) {
  const int div = required_divisor(arch);
  if (img.shape().rank() != 3 || img.shape()[0] != 3)
    throw ShapeError("net forward: expected {3,H,W} input, got " +
                     img.shape().str());
  if (img.shape()[1] % div != 0 || img.shape()[2] % div != 0)
    throw ShapeError("net forward: input dims " + img.shape().str() +
                     " must be divisible by " + std::to_string(div));
}

}  // namespace

void validate(const ArchDescriptor& arch) {
  if (arch.scales != 4)
    throw ConfigError("ArchDescriptor: this family is built with 4 scales");
  for (int w : arch.widths)
    if (w < 1) throw ConfigError("ArchDescriptor: widths must be >= 1");
  if (arch.kind == NetKind::Stereo && arch.max_disp < 1)
    throw ConfigError("ArchDescriptor: max_disp must be >= 1");
  if (arch.kind == NetKind::Mono && !(arch.mono_disp_frac > 0.0))
    throw ConfigError("ArchDescriptor: mono_disp_frac must be positive");
}

int required_divisor(const ArchDescriptor& arch) {
  return 1 << (arch.scales + 1);
}

std::vector<NamedTensor> param_specs(const ArchDescriptor& arch) {
  validate(arch);
  const auto [w1, w2, w3, w4] = arch.widths;
  std::vector<NamedTensor> out;

  add_conv(out, "enc1", w1, 3);
  add_conv(out, "enc2", w2, w1);
  const int merged =
      arch.kind == NetKind::Stereo ? arch.max_disp + 1 + w2 : w2;
  add_conv(out, "enc3", w3, merged);
  add_conv(out, "enc4", w4, w3);

  add_deconv(out, "dec4", w4, w3);
  add_conv(out, "ic4", w3, 2 * w3);
  add_deconv(out, "dec3", w3, w2);
  add_conv(out, "ic3", w2, w2 + merged);
  add_deconv(out, "dec2", w2, w1);
  add_conv(out, "ic2", w1, 2 * w1);
  add_deconv(out, "dec1", w1, w1);
  add_conv(out, "ic1", w1, w1 + 3);

  const int head_in[4] = {w1, w1, w2, w3};
  for (int m = 0; m < 4; ++m)
    add_conv(out, "disp" + std::to_string(m), 1, head_in[m]);
  if (arch.kind == NetKind::Stereo)
    for (int m = 0; m < 4; ++m)
      add_conv(out, "occ" + std::to_string(m), 1, head_in[m]);
  return out;
}

NetParams init_params(const ArchDescriptor& arch, std::uint64_t seed) {
  NetParams p;
  p.arch = arch;
  p.tensors = param_specs(arch);
  Rng rng(hash_key(seed, 0x1717'5eed'0001ULL));
  for (NamedTensor& t : p.tensors) {
    t.data.assign(t.numel(), 0.0);
    const bool is_weight = t.dims.size() == 4;
    if (!is_weight) continue;  // biases start at zero
    const bool is_deconv = t.dims[2] == 4;
    // deconv weight layout is {IC,OC,4,4}; stride 2 means each output sees
    // only a quarter of the taps
    const double fan_in = is_deconv ? t.dims[0] * 4.0 : t.dims[1] * 9.0;
    const double std = std::sqrt(2.0 / fan_in);
    for (double& v : t.data) v = std * rng.normal();
  }
  return p;
}

std::vector<Var> params_to_vars(const NetParams& p, bool trainable) {
  std::vector<Var> vars;
  vars.reserve(p.tensors.size());
  for (const NamedTensor& t : p.tensors) {
    Shape s(t.dims);
    vars.push_back(trainable ? Var::leaf(s, t.data)
                             : Var::constant(s, t.data));
  }
  return vars;
}

StereoGraphOut stereo_graph(const ArchDescriptor& arch,
                            const std::vector<Var>& params, const Var& left,
                            const Var& right, ActivationTrace* trace) {
  validate(arch);
  if (arch.kind != NetKind::Stereo)
    throw ShapeError("stereo_graph called with a mono descriptor");
  check_input_dims(arch, left);
  check_input_dims(arch, right);
  ParamCursor cur{params, arch};

  auto [e1w, e1b] = cur.take("enc1");
  auto [e2w, e2b] = cur.take("enc2");
  auto [e3w, e3b] = cur.take("enc3");
  auto [e4w, e4b] = cur.take("enc4");

  // shared two-stage feature encoder on both views
  const Var a1l = relu(conv2d(left, e1w, e1b, 2));
  const Var a1r = relu(conv2d(right, e1w, e1b, 2));
  const Var a2l = relu(conv2d(a1l, e2w, e2b, 2));
  const Var a2r = relu(conv2d(a1r, e2w, e2b, 2));
  record(trace, "enc1", a1l);
  record(trace, "enc2", a2l);

  const Var cost = corr1d(a2l, a2r, arch.max_disp);
  const Var merged = concat_channels(cost, a2l);
  record(trace, "corr", cost);

  const Var a3 = relu(conv2d(merged, e3w, e3b, 2));
  const Var a4 = relu(conv2d(a3, e4w, e4b, 2));
  record(trace, "enc3", a3);
  record(trace, "enc4", a4);

  auto [d4w, d4b] = cur.take("dec4");
  auto [i4w, i4b] = cur.take("ic4");
  auto [d3w, d3b] = cur.take("dec3");
  auto [i3w, i3b] = cur.take("ic3");
  auto [d2w, d2b] = cur.take("dec2");
  auto [i2w, i2b] = cur.take("ic2");
  auto [d1w, d1b] = cur.take("dec1");
  auto [i1w, i1b] = cur.take("ic1");

  const Var b3 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(a4, d4w, d4b)), a3), i4w, i4b,
             1));
  const Var b2 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b3, d3w, d3b)), merged), i3w,
             i3b, 1));
  const Var b1 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b2, d2w, d2b)), a1l), i2w,
             i2b, 1));
  const Var b0 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b1, d1w, d1b)), left), i1w,
             i1b, 1));
  record(trace, "dec3", b3);
  record(trace, "dec2", b2);
  record(trace, "dec1", b1);
  record(trace, "dec0", b0);

  const Var blocks[4] = {b0, b1, b2, b3};
  StereoGraphOut out;
  out.disp.resize(4);
  out.occ.resize(4);
  std::vector<std::pair<Var, Var>> disp_heads, occ_heads;
  for (int m = 0; m < 4; ++m) {
    auto [hw, hb] = cur.take("disp head");
    disp_heads.emplace_back(hw, hb);
  }
  for (int m = 0; m < 4; ++m) {
    auto [hw, hb] = cur.take("occ head");
    occ_heads.emplace_back(hw, hb);
  }
  for (int m = 0; m < 4; ++m) {
    out.disp[m] =
        softplus(conv2d(blocks[m], disp_heads[m].first, disp_heads[m].second, 1));
    out.occ[m] =
        sigmoid(conv2d(blocks[m], occ_heads[m].first, occ_heads[m].second, 1));
  }
  return out;
}

std::vector<Var> mono_graph(const ArchDescriptor& arch,
                            const std::vector<Var>& params, const Var& img,
                            ActivationTrace* trace) {
  validate(arch);
  if (arch.kind != NetKind::Mono)
    throw ShapeError("mono_graph called with a stereo descriptor");
  check_input_dims(arch, img);
  ParamCursor cur{params, arch};

  auto [e1w, e1b] = cur.take("enc1");
  auto [e2w, e2b] = cur.take("enc2");
  auto [e3w, e3b] = cur.take("enc3");
  auto [e4w, e4b] = cur.take("enc4");

  const Var a1 = relu(conv2d(img, e1w, e1b, 2));
  const Var a2 = relu(conv2d(a1, e2w, e2b, 2));
  const Var a3 = relu(conv2d(a2, e3w, e3b, 2));
  const Var a4 = relu(conv2d(a3, e4w, e4b, 2));
  record(trace, "enc1", a1);
  record(trace, "enc2", a2);
  record(trace, "enc3", a3);
  record(trace, "enc4", a4);

  auto [d4w, d4b] = cur.take("dec4");
  auto [i4w, i4b] = cur.take("ic4");
  auto [d3w, d3b] = cur.take("dec3");
  auto [i3w, i3b] = cur.take("ic3");
  auto [d2w, d2b] = cur.take("dec2");
  auto [i2w, i2b] = cur.take("ic2");
  auto [d1w, d1b] = cur.take("dec1");
  auto [i1w, i1b] = cur.take("ic1");

  const Var b3 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(a4, d4w, d4b)), a3), i4w, i4b,
             1));
  const Var b2 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b3, d3w, d3b)), a2), i3w, i3b,
             1));
  const Var b1 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b2, d2w, d2b)), a1), i2w, i2b,
             1));
  const Var b0 = leaky_relu(
      conv2d(concat_channels(leaky_relu(deconv2d(b1, d1w, d1b)), img), i1w,
             i1b, 1));
  record(trace, "dec3", b3);
  record(trace, "dec2", b2);
  record(trace, "dec1", b1);
  record(trace, "dec0", b0);

  const Var blocks[4] = {b0, b1, b2, b3};
  std::vector<Var> disp(4);
  for (int m = 0; m < 4; ++m) {
    auto [hw, hb] = cur.take("disp head");
    const double d_max = arch.mono_disp_frac * blocks[m].shape()[2];
    disp[m] = mul_scalar(sigmoid(conv2d(blocks[m], hw, hb, 1)), d_max);
  }
  return disp;
}

PyramidPrediction stereo_forward(const NetParams& p, const Image& left,
                                 const Image& right) {
  const auto params = params_to_vars(p, false);
  const StereoGraphOut out =
      stereo_graph(p.arch, params, image_to_var(left), image_to_var(right));
  PyramidPrediction pyr;
  pyr.scales.resize(4);
  for (int m = 0; m < 4; ++m) {
    pyr.scales[m].disp = var_to_disparity(out.disp[m]);
    pyr.scales[m].occ = var_to_mask(out.occ[m]);
  }
  return pyr;
}

PyramidPrediction mono_forward(const NetParams& p, const Image& img) {
  const auto params = params_to_vars(p, false);
  const std::vector<Var> out = mono_graph(p.arch, params, image_to_var(img));
  PyramidPrediction pyr;
  pyr.scales.resize(4);
  for (int m = 0; m < 4; ++m) pyr.scales[m].disp = var_to_disparity(out[m]);
  return pyr;
}

}  // namespace sdd
