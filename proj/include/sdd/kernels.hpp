#pragma once

// Raw-array compute kernels behind the graph ops. The default versions in
// sdd::kern carry OpenMP pragmas; sdd::kern::ref holds plain serial twins
// used by tests and the benchmark. Both compute identical arithmetic per
// output element, so results must match bit-for-bit.
//
// All backward kernels ACCUMULATE (+=) into their gradient outputs.
// Every parallel loop writes disjoint outputs (gather form); reductions
// inside one output element run in a fixed order.

namespace sdd::kern {

struct ConvDims {
  int ic, ih, iw;  // input channels / height / width
  int oc;          // output channels
  int stride;      // 1 or 2; kernel 3x3, zero padding 1
  int oh() const { return (ih + 2 - 3) / stride + 1; }
  int ow() const { return (iw + 2 - 3) / stride + 1; }
};

void conv2d_fwd(const double* x, const double* w, const double* b, double* y,
                const ConvDims& d);
void conv2d_bwd_input(const double* gy, const double* w, double* gx,
                      const ConvDims& d);
void conv2d_bwd_weight(const double* gy, const double* x, double* gw,
                       const ConvDims& d);
void conv2d_bwd_bias(const double* gy, double* gb, const ConvDims& d);

struct DeconvDims {
  int ic, ih, iw;  // input; output is (oc, 2*ih, 2*iw); kernel 4x4 pad 1
  int oc;
};

void deconv2d_fwd(const double* x, const double* w, const double* b, double* y,
                  const DeconvDims& d);
void deconv2d_bwd_input(const double* gy, const double* w, double* gx,
                        const DeconvDims& d);
void deconv2d_bwd_weight(const double* gy, const double* x, double* gw,
                         const DeconvDims& d);
void deconv2d_bwd_bias(const double* gy, double* gb, const DeconvDims& d);

// cost volume: y(d,i,j) = (1/C) sum_c l(c,i,j) * r(c,i,j-d), 0 when j-d < 0
void corr1d_fwd(const double* l, const double* r, double* y, int c, int h,
                int w, int max_disp);
void corr1d_bwd(const double* gy, const double* l, const double* r, double* gl,
                double* gr, int c, int h, int w, int max_disp);

// horizontal bilinear warp: y(c,i,j) = img(c, i, j - disp(i,j)), edge clamp
void warp_fwd(const double* img, const double* disp, double* y, int c, int h,
              int w);
void warp_bwd(const double* gy, const double* img, const double* disp,
              double* gimg, double* gdisp, int c, int h, int w);

namespace ref {

void conv2d_fwd(const double* x, const double* w, const double* b, double* y,
                const ConvDims& d);
void conv2d_bwd_input(const double* gy, const double* w, double* gx,
                      const ConvDims& d);
void conv2d_bwd_weight(const double* gy, const double* x, double* gw,
                       const ConvDims& d);
void conv2d_bwd_bias(const double* gy, double* gb, const ConvDims& d);
void deconv2d_fwd(const double* x, const double* w, const double* b, double* y,
                  const DeconvDims& d);
void deconv2d_bwd_input(const double* gy, const double* w, double* gx,
                        const DeconvDims& d);
void deconv2d_bwd_weight(const double* gy, const double* x, double* gw,
                         const DeconvDims& d);
void deconv2d_bwd_bias(const double* gy, double* gb, const DeconvDims& d);
void corr1d_fwd(const double* l, const double* r, double* y, int c, int h,
                int w, int max_disp);
void corr1d_bwd(const double* gy, const double* l, const double* r, double* gl,
                double* gr, int c, int h, int w, int max_disp);
void warp_fwd(const double* img, const double* disp, double* y, int c, int h,
              int w);
void warp_bwd(const double* gy, const double* img, const double* disp,
              double* gimg, double* gdisp, int c, int h, int w);

}  // namespace ref

}  // namespace sdd::kern
