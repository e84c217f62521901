#pragma once

#include <cstdint>
#include <vector>

#include "sdd/types.hpp"

namespace sdd {

enum class TextureFamily { NoisePatch, SmoothGradient, Striped };
enum class Domain { A, B };

struct SceneSpec {
  int width = 160;
  int height = 96;
  int layer_count = 6;  // including the background layer
  double disp_min = 1.0;
  double disp_max = 22.0;
  TextureFamily texture_family = TextureFamily::NoisePatch;
  bool slant_enabled = false;
  std::uint64_t rng_seed = 0;
};

// (I^L, I^R, D^L, D^R, M) tuple. occ_left comes from the brute-force
// geometric oracle: a left pixel is occluded iff its right-view
// correspondence is out of frame or covered by a nearer layer.
struct StereoSample {
  Image left;
  Image right;
  DisparityMap disp_left;
  DisparityMap disp_right;
  OcclusionMask occ_left;
};

// A textured plane. Disparity over the footprint is
// d(i,j) = d0 + gx*(j-xc) + gy*(i-yc); fronto-parallel layers have gx=gy=0.
// Larger disparity means nearer; nearer layers win composition.
struct SceneLayer {
  double x0, x1;  // left-view column span [x0, x1)
  int y0, y1;     // row span [y0, y1)
  double d0, gx, gy, xc, yc;
  int texture;  // 0 noise-patch, 1 smooth-gradient, 2 striped
  double base[3];
  double amp;
  double freq_x, freq_y;  // smooth-gradient (cycles per pixel)
  double angle, period;   // striped
  double phase[3];
  int block;
  std::uint64_t tex_seed;

  double disparity(double i, double j) const {
    return d0 + gx * (j - xc) + gy * (i - yc);
  }
  bool covers(double i, double j) const {
    return i >= y0 && i < y1 && j >= x0 && j < x1;
  }
};

// Deterministic layer list for a spec; exposed so tests can re-derive
// occlusion and disparity independently of the renderer.
std::vector<SceneLayer> build_layers(const SceneSpec& spec);

// Texture color of one layer at (possibly fractional) left-view coordinates.
double layer_color(const SceneLayer& layer, double i, double j, int channel);

// Index into `layers` of the winning (nearest) layer at a left-view pixel,
// or -1 if uncovered (cannot happen when a background layer exists).
int left_winner(const std::vector<SceneLayer>& layers, double i, double j);

// Winning layer at a right-view position: returns the layer index and the
// left-view source column u solving u - d(i,u) = x_right.
struct RightHit {
  int layer = -1;
  double source_col = 0.0;
};
RightHit right_winner(const std::vector<SceneLayer>& layers, double i,
                      double x_right);

StereoSample generate_scene(const SceneSpec& spec);

SceneSpec domain_preset(Domain domain);

void validate(const SceneSpec& spec);

}  // namespace sdd
