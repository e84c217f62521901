#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sdd/graph.hpp"
#include "sdd/types.hpp"

namespace sdd {

enum class NetKind { Stereo, Mono };

// Desk-scale encoder-decoder family. Both networks share the topology:
// 4 stride-2 encoder stages, a mirrored deconv decoder with encoder
// shortcuts, and prediction heads at 4 scales (scale 0 = full resolution).
// The stereo variant runs a shared (siamese) two-stage feature encoder on
// both views, correlates at quarter resolution and continues on the
// concatenated cost volume + left features; it predicts a disparity head
// (softplus) and an occlusion head (sigmoid) per scale. The mono variant
// predicts disparity only, bounded by sigmoid * (mono_disp_frac * width).
struct ArchDescriptor {
  NetKind kind = NetKind::Stereo;
  std::array<int, 4> widths = {8, 16, 32, 32};
  int scales = 4;
  int max_disp = 16;  // at quarter resolution (stereo only)
  double mono_disp_frac = 0.3;
};

void validate(const ArchDescriptor& arch);

// Input dims must be divisible by 2^(scales+1).
int required_divisor(const ArchDescriptor& arch);

struct NamedTensor {
  std::string name;
  std::vector<int> dims;
  std::vector<double> data;
  int numel() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
};

struct NetParams {
  ArchDescriptor arch;
  std::vector<NamedTensor> tensors;  // canonical order

  std::size_t total_params() const {
    std::size_t n = 0;
    for (const auto& t : tensors) n += t.data.size();
    return n;
  }
};

// Expected tensor names/shapes for an architecture (data left empty).
std::vector<NamedTensor> param_specs(const ArchDescriptor& arch);

// He-style fan-in scaled normal init, deterministic per seed.
NetParams init_params(const ArchDescriptor& arch, std::uint64_t seed);

// Per-scale graph outputs, index m = 0..scales-1 (m=0 full resolution).
struct StereoGraphOut {
  std::vector<Var> disp;
  std::vector<Var> occ;
};

// Optional per-block activation statistics (name, stddev), for init checks.
using ActivationTrace = std::vector<std::pair<std::string, double>>;

// `params` are graph tensors in canonical order (leaves when training).
StereoGraphOut stereo_graph(const ArchDescriptor& arch,
                            const std::vector<Var>& params, const Var& left,
                            const Var& right, ActivationTrace* trace = nullptr);

std::vector<Var> mono_graph(const ArchDescriptor& arch,
                            const std::vector<Var>& params, const Var& img,
                            ActivationTrace* trace = nullptr);

// Wraps NetParams tensors as graph leaves (requires_grad) or constants.
std::vector<Var> params_to_vars(const NetParams& p, bool trainable);

// Raster convenience forward passes (no gradients).
PyramidPrediction stereo_forward(const NetParams& p, const Image& left,
                                 const Image& right);
PyramidPrediction mono_forward(const NetParams& p, const Image& img);

}  // namespace sdd
