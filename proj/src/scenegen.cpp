#include "sdd/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdd/rng.hpp"

namespace sdd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double hash_u01(std::uint64_t seed, std::int64_t a, std::int64_t b,
                std::int64_t c) {
  std::uint64_t h = hash_key(seed, static_cast<std::uint64_t>(a));
  h = hash_key(h, static_cast<std::uint64_t>(b));
  h = hash_key(h, static_cast<std::uint64_t>(c));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Clamp the disparity plane so it stays inside [lo, hi] over the footprint.
void fit_plane_range(SceneLayer& layer, double lo, double hi) {
  const auto range = [&layer] {
    const double corners[4] = {layer.disparity(layer.y0, layer.x0),
                               layer.disparity(layer.y0, layer.x1),
                               layer.disparity(layer.y1, layer.x0),
                               layer.disparity(layer.y1, layer.x1)};
    return std::pair{*std::min_element(corners, corners + 4),
                     *std::max_element(corners, corners + 4)};
  };
  auto [mn, mx] = range();
  if (mx - mn > hi - lo) {
    const double shrink = (hi - lo) / (mx - mn);
    layer.gx *= shrink;
    layer.gy *= shrink;
    std::tie(mn, mx) = range();
  }
  if (mn < lo)
    layer.d0 += lo - mn;
  else if (mx > hi)
    layer.d0 -= mx - hi;
}

void draw_texture(SceneLayer& layer, TextureFamily family, int index,
                  Rng& rng) {
  switch (family) {
    case TextureFamily::NoisePatch:
      layer.texture = 0;
      break;
    case TextureFamily::Striped:
      layer.texture = 2;
      break;
    case TextureFamily::SmoothGradient:
      // this family mixes in striped foreground layers for visual variety
      layer.texture = (index % 2 == 1) ? 2 : 1;
      break;
  }
  for (int c = 0; c < 3; ++c) layer.base[c] = rng.uniform(0.35, 0.65);
  layer.amp = rng.uniform(0.12, 0.26);
  const double wavelength = rng.uniform(40.0, 110.0);
  const double dir = rng.uniform(0.0, kTwoPi);
  layer.freq_x = std::cos(dir) / wavelength;
  layer.freq_y = std::sin(dir) / wavelength;
  layer.angle = rng.uniform(0.0, kTwoPi);
  layer.period = rng.uniform(10.0, 26.0);
  for (int c = 0; c < 3; ++c) layer.phase[c] = rng.uniform(0.0, kTwoPi);
  layer.block = rng.uniform_int(6, 12);
  layer.tex_seed = rng.next_u64();
}

}  // namespace

void validate(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0)
    throw ConfigError("SceneSpec: non-positive dimensions");
  if (spec.layer_count < 1) throw ConfigError("SceneSpec: layer_count < 1");
  if (spec.disp_min < 0.0 || spec.disp_min > spec.disp_max)
    throw ConfigError("SceneSpec: invalid disparity range");
  if (!(spec.disp_max < spec.width / 4.0))
    throw ConfigError("SceneSpec: disp_max must be < width/4");
}

double layer_color(const SceneLayer& layer, double i, double j, int channel) {
  switch (layer.texture) {
    case 0: {  // noise patch; integer texture coordinates by construction
      const std::int64_t ii = std::llround(i), jj = std::llround(j);
      const std::int64_t bi = ii >= 0 ? ii / layer.block
                                      : (ii - layer.block + 1) / layer.block;
      const std::int64_t bj = jj >= 0 ? jj / layer.block
                                      : (jj - layer.block + 1) / layer.block;
      const double block_u = hash_u01(layer.tex_seed, bi, bj, 100 + channel);
      const double pix_u = hash_u01(layer.tex_seed, ii, jj, channel);
      return 0.08 + 0.84 * (0.3 * block_u + 0.7 * pix_u);
    }
    case 1: {  // smooth gradient
      return layer.base[channel] +
             layer.amp * std::sin(kTwoPi * (layer.freq_x * j +
                                            layer.freq_y * i) +
                                  layer.phase[channel]);
    }
    default: {  // striped
      const double s = (std::cos(layer.angle) * j + std::sin(layer.angle) * i) /
                       layer.period;
      return layer.base[channel] +
             layer.amp * std::sin(kTwoPi * s + layer.phase[channel] * 0.25);
    }
  }
}

std::vector<SceneLayer> build_layers(const SceneSpec& spec) {
  validate(spec);
  Rng rng(spec.rng_seed);
  std::vector<SceneLayer> layers;
  layers.reserve(spec.layer_count);

  const double w = spec.width, h = spec.height;
  const double lo = std::max(0.25, spec.disp_min);
  const double hi = spec.disp_max;

  // background: extended footprint so the right view is fully covered
  SceneLayer bg{};
  bg.x0 = -w;
  bg.x1 = 2.0 * w;
  bg.y0 = 0;
  bg.y1 = spec.height;
  bg.xc = w / 2.0;
  bg.yc = h / 2.0;
  if (spec.slant_enabled) {
    // ground-plane ramp: disparity grows toward the bottom of the frame
    const double top = spec.disp_min;
    const double bottom = spec.disp_min + 0.55 * (hi - spec.disp_min);
    bg.gy = (bottom - top) / (h - 1.0);
    bg.gx = 0.0;
    bg.d0 = 0.5 * (top + bottom);
  } else {
    const int b_lo = static_cast<int>(std::ceil(spec.disp_min));
    const int b_hi = std::min(static_cast<int>(hi), b_lo + 5);
    bg.d0 = rng.uniform_int(b_lo, b_hi);
    bg.gx = bg.gy = 0.0;
  }
  draw_texture(bg, spec.texture_family, 0, rng);
  layers.push_back(bg);

  for (int k = 1; k < spec.layer_count; ++k) {
    SceneLayer fg{};
    const int rw = rng.uniform_int(spec.width / 8, spec.width * 2 / 5);
    const int rh = rng.uniform_int(spec.height / 6, spec.height / 2);
    fg.x0 = rng.uniform_int(0, spec.width - rw);
    fg.x1 = fg.x0 + rw;
    fg.y0 = rng.uniform_int(0, spec.height - rh);
    fg.y1 = fg.y0 + rh;
    fg.xc = 0.5 * (fg.x0 + fg.x1);
    fg.yc = 0.5 * (fg.y0 + fg.y1);
    if (spec.slant_enabled) {
      fg.d0 = rng.uniform(spec.disp_min + 2.0, hi);
      fg.gx = rng.uniform(-0.04, 0.04);
      fg.gy = rng.uniform(0.0, 0.12);
      fit_plane_range(fg, lo, hi);
    } else {
      fg.d0 = rng.uniform_int(static_cast<int>(std::ceil(spec.disp_min)),
                              static_cast<int>(hi));
      fg.gx = fg.gy = 0.0;
    }
    draw_texture(fg, spec.texture_family, k, rng);
    layers.push_back(fg);
  }
  return layers;
}

int left_winner(const std::vector<SceneLayer>& layers, double i, double j) {
  int best = -1;
  double best_d = -1.0;
  for (int k = 0; k < static_cast<int>(layers.size()); ++k) {
    const SceneLayer& l = layers[k];
    if (!l.covers(i, j)) continue;
    const double d = l.disparity(i, j);
    if (d > best_d || (d == best_d && k > best)) {
      best = k;
      best_d = d;
    }
  }
  return best;
}

RightHit right_winner(const std::vector<SceneLayer>& layers, double i,
                      double x_right) {
  RightHit hit;
  double best_d = -1.0;
  for (int k = 0; k < static_cast<int>(layers.size()); ++k) {
    const SceneLayer& l = layers[k];
    if (i < l.y0 || i >= l.y1) continue;
    // solve u - d(i,u) = x_right for the left-view source column u
    const double u =
        (x_right + l.d0 - l.gx * l.xc + l.gy * (i - l.yc)) / (1.0 - l.gx);
    if (u < l.x0 || u >= l.x1) continue;
    const double d = u - x_right;
    if (d > best_d || (d == best_d && k > hit.layer)) {
      hit.layer = k;
      hit.source_col = u;
      best_d = d;
    }
  }
  return hit;
}

StereoSample generate_scene(const SceneSpec& spec) {
  const std::vector<SceneLayer> layers = build_layers(spec);
  const int h = spec.height, w = spec.width;

  StereoSample s;
  s.left = Image(h, w, 3);
  s.right = Image(h, w, 3);
  s.disp_left = DisparityMap(h, w);
  s.disp_right = DisparityMap(h, w);
  s.occ_left = OcclusionMask(h, w);

#pragma omp parallel for schedule(static)
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const int li = left_winner(layers, i, j);
      const SceneLayer& ll = layers[li];
      const double dl = ll.disparity(i, j);
      s.disp_left.at(i, j) = dl;
      for (int c = 0; c < 3; ++c)
        s.left.at(i, j, c) = std::clamp(layer_color(ll, i, j, c), 0.0, 1.0);

      const RightHit rh = right_winner(layers, i, j);
      const SceneLayer& rl = layers[rh.layer];
      s.disp_right.at(i, j) = rh.source_col - j;
      for (int c = 0; c < 3; ++c)
        s.right.at(i, j, c) =
            std::clamp(layer_color(rl, i, rh.source_col, c), 0.0, 1.0);

      // geometric occlusion oracle
      const double xr = j - dl;
      if (xr < 0.0 || xr > w - 1.0) {
        s.occ_left.at(i, j) = 0.0;
      } else {
        const RightHit vis = right_winner(layers, i, xr);
        s.occ_left.at(i, j) = (vis.layer == li) ? 1.0 : 0.0;
      }
    }
  }
  return s;
}

SceneSpec domain_preset(Domain domain) {
  SceneSpec spec;
  spec.width = 160;
  spec.height = 96;
  spec.layer_count = 6;
  spec.disp_min = 1.0;
  spec.disp_max = 22.0;
  if (domain == Domain::A) {
    spec.texture_family = TextureFamily::NoisePatch;
    spec.slant_enabled = false;
  } else {
    spec.texture_family = TextureFamily::SmoothGradient;
    spec.slant_enabled = true;
  }
  return spec;
}

}  // namespace sdd
