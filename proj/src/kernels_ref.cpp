#include "sdd/kernels.hpp"

#include "sdd/geometry.hpp"

// Serial reference kernels. Kept deliberately simple: plain loop nests with
// the same per-element accumulation order as the OpenMP versions in
// kernels_omp.cpp, so outputs agree bit-for-bit.

namespace sdd::kern::ref {

void conv2d_fwd(const double* x, const double* w, const double* b, double* y,
                const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
  for (int oc = 0; oc < d.oc; ++oc)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = b[oc];
        for (int ic = 0; ic < d.ic; ++ic)
          for (int ky = 0; ky < 3; ++ky) {
            const int iy = oy * d.stride - 1 + ky;
            if (iy < 0 || iy >= d.ih) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int ix = ox * d.stride - 1 + kx;
              if (ix < 0 || ix >= d.iw) continue;
              acc += x[(ic * d.ih + iy) * d.iw + ix] *
                     w[((oc * d.ic + ic) * 3 + ky) * 3 + kx];
            }
          }
        y[(oc * oh + oy) * ow + ox] = acc;
      }
}

void conv2d_bwd_input(const double* gy, const double* w, double* gx,
                      const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
  for (int ic = 0; ic < d.ic; ++ic)
    for (int iy = 0; iy < d.ih; ++iy)
      for (int ix = 0; ix < d.iw; ++ix) {
        double acc = 0.0;
        for (int oc = 0; oc < d.oc; ++oc)
          for (int ky = 0; ky < 3; ++ky) {
            const int ty = iy + 1 - ky;
            if (ty < 0 || ty % d.stride != 0) continue;
            const int oy = ty / d.stride;
            if (oy >= oh) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int tx = ix + 1 - kx;
              if (tx < 0 || tx % d.stride != 0) continue;
              const int ox = tx / d.stride;
              if (ox >= ow) continue;
              acc += gy[(oc * oh + oy) * ow + ox] *
                     w[((oc * d.ic + ic) * 3 + ky) * 3 + kx];
            }
          }
        gx[(ic * d.ih + iy) * d.iw + ix] += acc;
      }
}

void conv2d_bwd_weight(const double* gy, const double* x, double* gw,
                       const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
  for (int oc = 0; oc < d.oc; ++oc)
    for (int ic = 0; ic < d.ic; ++ic)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          double acc = 0.0;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * d.stride - 1 + ky;
            if (iy < 0 || iy >= d.ih) continue;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * d.stride - 1 + kx;
              if (ix < 0 || ix >= d.iw) continue;
              acc += gy[(oc * oh + oy) * ow + ox] *
                     x[(ic * d.ih + iy) * d.iw + ix];
            }
          }
          gw[((oc * d.ic + ic) * 3 + ky) * 3 + kx] += acc;
        }
}

void conv2d_bwd_bias(const double* gy, double* gb, const ConvDims& d) {
  const int n = d.oh() * d.ow();
  for (int oc = 0; oc < d.oc; ++oc) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += gy[oc * n + k];
    gb[oc] += acc;
  }
}

void deconv2d_fwd(const double* x, const double* w, const double* b, double* y,
                  const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
  for (int oc = 0; oc < d.oc; ++oc)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = b[oc];
        for (int ic = 0; ic < d.ic; ++ic)
          for (int ky = 0; ky < 4; ++ky) {
            const int ty = oy + 1 - ky;
            if (ty < 0 || (ty & 1)) continue;
            const int iy = ty >> 1;
            if (iy >= d.ih) continue;
            for (int kx = 0; kx < 4; ++kx) {
              const int tx = ox + 1 - kx;
              if (tx < 0 || (tx & 1)) continue;
              const int ix = tx >> 1;
              if (ix >= d.iw) continue;
              acc += x[(ic * d.ih + iy) * d.iw + ix] *
                     w[((ic * d.oc + oc) * 4 + ky) * 4 + kx];
            }
          }
        y[(oc * oh + oy) * ow + ox] = acc;
      }
}

void deconv2d_bwd_input(const double* gy, const double* w, double* gx,
                        const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
  for (int ic = 0; ic < d.ic; ++ic)
    for (int iy = 0; iy < d.ih; ++iy)
      for (int ix = 0; ix < d.iw; ++ix) {
        double acc = 0.0;
        for (int oc = 0; oc < d.oc; ++oc)
          for (int ky = 0; ky < 4; ++ky) {
            const int oy = 2 * iy - 1 + ky;
            if (oy < 0 || oy >= oh) continue;
            for (int kx = 0; kx < 4; ++kx) {
              const int ox = 2 * ix - 1 + kx;
              if (ox < 0 || ox >= ow) continue;
              acc += gy[(oc * oh + oy) * ow + ox] *
                     w[((ic * d.oc + oc) * 4 + ky) * 4 + kx];
            }
          }
        gx[(ic * d.ih + iy) * d.iw + ix] += acc;
      }
}

void deconv2d_bwd_weight(const double* gy, const double* x, double* gw,
                         const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
  for (int ic = 0; ic < d.ic; ++ic)
    for (int oc = 0; oc < d.oc; ++oc)
      for (int ky = 0; ky < 4; ++ky)
        for (int kx = 0; kx < 4; ++kx) {
          double acc = 0.0;
          for (int iy = 0; iy < d.ih; ++iy) {
            const int oy = 2 * iy - 1 + ky;
            if (oy < 0 || oy >= oh) continue;
            for (int ix = 0; ix < d.iw; ++ix) {
              const int ox = 2 * ix - 1 + kx;
              if (ox < 0 || ox >= ow) continue;
              acc += x[(ic * d.ih + iy) * d.iw + ix] *
                     gy[(oc * oh + oy) * ow + ox];
            }
          }
          gw[((ic * d.oc + oc) * 4 + ky) * 4 + kx] += acc;
        }
}

void deconv2d_bwd_bias(const double* gy, double* gb, const DeconvDims& d) {
  const int n = 4 * d.ih * d.iw;
  for (int oc = 0; oc < d.oc; ++oc) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += gy[oc * n + k];
    gb[oc] += acc;
  }
}

void corr1d_fwd(const double* l, const double* r, double* y, int c, int h,
                int w, int max_disp) {
  const double inv_c = 1.0 / c;
  for (int dd = 0; dd <= max_disp; ++dd)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        double acc = 0.0;
        if (j - dd >= 0) {
          for (int ch = 0; ch < c; ++ch)
            acc += l[(ch * h + i) * w + j] * r[(ch * h + i) * w + j - dd];
        }
        y[(dd * h + i) * w + j] = acc * inv_c;
      }
}

void corr1d_bwd(const double* gy, const double* l, const double* r, double* gl,
                double* gr, int c, int h, int w, int max_disp) {
  const double inv_c = 1.0 / c;
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        double al = 0.0, ar = 0.0;
        for (int dd = 0; dd <= max_disp; ++dd) {
          if (j - dd >= 0)
            al += gy[(dd * h + i) * w + j] * r[(ch * h + i) * w + j - dd];
          if (j + dd < w)
            ar += gy[(dd * h + i) * w + j + dd] * l[(ch * h + i) * w + j + dd];
        }
        gl[(ch * h + i) * w + j] += al * inv_c;
        gr[(ch * h + i) * w + j] += ar * inv_c;
      }
}

void warp_fwd(const double* img, const double* disp, double* y, int c, int h,
              int w) {
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const HorizTaps t = horiz_taps(j - disp[i * w + j], w);
      for (int ch = 0; ch < c; ++ch) {
        const double* row = img + (ch * h + i) * static_cast<std::size_t>(w);
        y[(ch * h + i) * w + j] = (1.0 - t.frac) * row[t.lo] + t.frac * row[t.hi];
      }
    }
}

void warp_bwd(const double* gy, const double* img, const double* disp,
              double* gimg, double* gdisp, int c, int h, int w) {
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const double x = j - disp[i * w + j];
      const bool clamped = x <= 0.0 || x >= w - 1.0;
      const HorizTaps t = horiz_taps(x, w);
      double acc_d = 0.0;
      for (int ch = 0; ch < c; ++ch) {
        const double g = gy[(ch * h + i) * w + j];
        const double* row = img + (ch * h + i) * static_cast<std::size_t>(w);
        if (gimg) {
          gimg[(ch * h + i) * w + t.lo] += g * (1.0 - t.frac);
          gimg[(ch * h + i) * w + t.hi] += g * t.frac;
        }
        if (!clamped) acc_d += g * (row[t.hi] - row[t.lo]);
      }
      // d(output)/d(disp) = -d(output)/dx
      if (gdisp) gdisp[i * w + j] += -acc_d;
    }
}

}  // namespace sdd::kern::ref
