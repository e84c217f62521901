#include "sdd/kernels.hpp"

#include "sdd/geometry.hpp"

// OpenMP kernels. Parallel loops run over disjoint output elements (gather
// form) and keep each element's accumulation order identical to the serial
// reference, so results are bit-identical for any thread count.

namespace sdd::kern {

void conv2d_fwd(const double* x, const double* w, const double* b, double* y,
                const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < d.oc; ++oc)
    for (int oy = 0; oy < oh; ++oy) {
      const int iy0 = oy * d.stride - 1;
      for (int ox = 0; ox < ow; ++ox) {
        double acc = b[oc];
        const int ix0 = ox * d.stride - 1;
        for (int ic = 0; ic < d.ic; ++ic) {
          const double* xc = x + (static_cast<std::size_t>(ic) * d.ih) * d.iw;
          const double* wc = w + ((static_cast<std::size_t>(oc) * d.ic + ic) * 3) * 3;
          for (int ky = 0; ky < 3; ++ky) {
            const int iy = iy0 + ky;
            if (iy < 0 || iy >= d.ih) continue;
            const double* xrow = xc + static_cast<std::size_t>(iy) * d.iw;
            const double* wrow = wc + 3 * ky;
            for (int kx = 0; kx < 3; ++kx) {
              const int ix = ix0 + kx;
              if (ix < 0 || ix >= d.iw) continue;
              acc += xrow[ix] * wrow[kx];
            }
          }
        }
        y[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox] = acc;
      }
    }
}

void conv2d_bwd_input(const double* gy, const double* w, double* gx,
                      const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
#pragma omp parallel for collapse(2) schedule(static)
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
              acc += gy[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox] *
                     w[((static_cast<std::size_t>(oc) * d.ic + ic) * 3 + ky) * 3 + kx];
            }
          }
        gx[(static_cast<std::size_t>(ic) * d.ih + iy) * d.iw + ix] += acc;
      }
}

void conv2d_bwd_weight(const double* gy, const double* x, double* gw,
                       const ConvDims& d) {
  const int oh = d.oh(), ow = d.ow();
#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < d.oc; ++oc)
    for (int ic = 0; ic < d.ic; ++ic)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) {
          double acc = 0.0;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = oy * d.stride - 1 + ky;
            if (iy < 0 || iy >= d.ih) continue;
            const double* gyrow = gy + (static_cast<std::size_t>(oc) * oh + oy) * ow;
            const double* xrow = x + (static_cast<std::size_t>(ic) * d.ih + iy) * d.iw;
            for (int ox = 0; ox < ow; ++ox) {
              const int ix = ox * d.stride - 1 + kx;
              if (ix < 0 || ix >= d.iw) continue;
              acc += gyrow[ox] * xrow[ix];
            }
          }
          gw[((static_cast<std::size_t>(oc) * d.ic + ic) * 3 + ky) * 3 + kx] += acc;
        }
}

void conv2d_bwd_bias(const double* gy, double* gb, const ConvDims& d) {
  const int n = d.oh() * d.ow();
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < d.oc; ++oc) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += gy[static_cast<std::size_t>(oc) * n + k];
    gb[oc] += acc;
  }
}

void deconv2d_fwd(const double* x, const double* w, const double* b, double* y,
                  const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
#pragma omp parallel for collapse(2) schedule(static)
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
              acc += x[(static_cast<std::size_t>(ic) * d.ih + iy) * d.iw + ix] *
                     w[((static_cast<std::size_t>(ic) * d.oc + oc) * 4 + ky) * 4 + kx];
            }
          }
        y[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox] = acc;
      }
}

void deconv2d_bwd_input(const double* gy, const double* w, double* gx,
                        const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
#pragma omp parallel for collapse(2) schedule(static)
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
              acc += gy[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox] *
                     w[((static_cast<std::size_t>(ic) * d.oc + oc) * 4 + ky) * 4 + kx];
            }
          }
        gx[(static_cast<std::size_t>(ic) * d.ih + iy) * d.iw + ix] += acc;
      }
}

void deconv2d_bwd_weight(const double* gy, const double* x, double* gw,
                         const DeconvDims& d) {
  const int oh = 2 * d.ih, ow = 2 * d.iw;
#pragma omp parallel for collapse(2) schedule(static)
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
              acc += x[(static_cast<std::size_t>(ic) * d.ih + iy) * d.iw + ix] *
                     gy[(static_cast<std::size_t>(oc) * oh + oy) * ow + ox];
            }
          }
          gw[((static_cast<std::size_t>(ic) * d.oc + oc) * 4 + ky) * 4 + kx] += acc;
        }
}

void deconv2d_bwd_bias(const double* gy, double* gb, const DeconvDims& d) {
  const int n = 4 * d.ih * d.iw;
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < d.oc; ++oc) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += gy[static_cast<std::size_t>(oc) * n + k];
    gb[oc] += acc;
  }
}

void corr1d_fwd(const double* l, const double* r, double* y, int c, int h,
                int w, int max_disp) {
  const double inv_c = 1.0 / c;
#pragma omp parallel for collapse(2) schedule(static)
  for (int dd = 0; dd <= max_disp; ++dd)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        double acc = 0.0;
        if (j - dd >= 0) {
          for (int ch = 0; ch < c; ++ch)
            acc += l[(static_cast<std::size_t>(ch) * h + i) * w + j] *
                   r[(static_cast<std::size_t>(ch) * h + i) * w + j - dd];
        }
        y[(static_cast<std::size_t>(dd) * h + i) * w + j] = acc * inv_c;
      }
}

void corr1d_bwd(const double* gy, const double* l, const double* r, double* gl,
                double* gr, int c, int h, int w, int max_disp) {
  const double inv_c = 1.0 / c;
#pragma omp parallel for collapse(2) schedule(static)
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) {
        double al = 0.0, ar = 0.0;
        for (int dd = 0; dd <= max_disp; ++dd) {
          if (j - dd >= 0)
            al += gy[(static_cast<std::size_t>(dd) * h + i) * w + j] *
                  r[(static_cast<std::size_t>(ch) * h + i) * w + j - dd];
          if (j + dd < w)
            ar += gy[(static_cast<std::size_t>(dd) * h + i) * w + j + dd] *
                  l[(static_cast<std::size_t>(ch) * h + i) * w + j + dd];
        }
        gl[(static_cast<std::size_t>(ch) * h + i) * w + j] += al * inv_c;
        gr[(static_cast<std::size_t>(ch) * h + i) * w + j] += ar * inv_c;
      }
}

void warp_fwd(const double* img, const double* disp, double* y, int c, int h,
              int w) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const HorizTaps t = horiz_taps(j - disp[static_cast<std::size_t>(i) * w + j], w);
      for (int ch = 0; ch < c; ++ch) {
        const double* row = img + (static_cast<std::size_t>(ch) * h + i) * w;
        y[(static_cast<std::size_t>(ch) * h + i) * w + j] =
            (1.0 - t.frac) * row[t.lo] + t.frac * row[t.hi];
      }
    }
}

void warp_bwd(const double* gy, const double* img, const double* disp,
              double* gimg, double* gdisp, int c, int h, int w) {
  // all writes for row i stay in row i, so rows are independent
#pragma omp parallel for schedule(static)
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) {
      const double x = j - disp[static_cast<std::size_t>(i) * w + j];
      const bool clamped = x <= 0.0 || x >= w - 1.0;
      const HorizTaps t = horiz_taps(x, w);
      double acc_d = 0.0;
      for (int ch = 0; ch < c; ++ch) {
        const std::size_t row = (static_cast<std::size_t>(ch) * h + i) * w;
        const double g = gy[row + j];
        if (gimg) {
          gimg[row + t.lo] += g * (1.0 - t.frac);
          gimg[row + t.hi] += g * t.frac;
        }
        if (!clamped) acc_d += g * (img[row + t.hi] - img[row + t.lo]);
      }
      if (gdisp) gdisp[static_cast<std::size_t>(i) * w + j] += -acc_d;
    }
}

}  // namespace sdd::kern
