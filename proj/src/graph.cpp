#include "sdd/graph.hpp"

#include <cmath>
#include <unordered_set>

#include "sdd/kernels.hpp"

namespace sdd {

namespace {

// worth spawning threads only for biggish elementwise arrays
constexpr int kParallelCutoff = 16384;

NodePtr make_node(Shape shape, const char* op) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->value.resize(n->shape.numel());
  n->op = op;
  return n;
}

void check_same_shape(const char* op, const Var& a, const Var& b) {
  if (!(a.shape() == b.shape()))
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape().str() +
                     " vs " + b.shape().str());
}

void check_rank3(const char* op, const Var& a) {
  if (a.shape().rank() != 3)
    throw ShapeError(std::string(op) + ": expected rank-3 tensor, got " +
                     a.shape().str());
}

bool any_requires_grad(std::initializer_list<const Var*> vars) {
  for (const Var* v : vars)
    if ((*v).requires_grad()) return true;
  return false;
}

void ensure_grad(Node& n) {
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
}

}  // namespace

std::string Shape::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + ")";
}

Var Var::constant(Shape shape, std::vector<double> values) {
  auto n = make_node(std::move(shape), "constant");
  if (static_cast<int>(values.size()) != n->shape.numel())
    throw ShapeError("Var::constant: value size does not match shape " +
                     n->shape.str());
  n->value = std::move(values);
  return Var(n);
}

Var Var::leaf(Shape shape, std::vector<double> values) {
  Var v = constant(std::move(shape), std::move(values));
  v.node()->requires_grad = true;
  v.node()->op = "leaf";
  return v;
}

const std::vector<double>& Var::grad() const {
  if (node_->grad.empty())
    throw NumericError("Var::grad: no gradient (run backward first)");
  return node_->grad;
}

double Var::scalar() const {
  if (node_->shape.numel() != 1)
    throw ShapeError("Var::scalar: tensor has shape " + node_->shape.str());
  return node_->value[0];
}

void backward(const Var& loss) {
  if (loss.shape().numel() != 1)
    throw ShapeError("backward: loss must be scalar, got " +
                     loss.shape().str());

  // iterative post-order DFS, then run closures in reverse
  std::vector<Node*> order;
  std::unordered_set<Node*> visited;
  std::vector<std::pair<Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  visited.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [n, next] = stack.back();
    if (next < n->parents.size()) {
      Node* p = n->parents[next++].get();
      if (p->requires_grad && !visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }

  for (Node* n : order) ensure_grad(*n);
  loss.node()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node* n = *it;
    if (n->backward_fn && n->requires_grad) n->backward_fn(*n);
  }
}

// ------------------------------------------------------------- elementwise

namespace {

template <typename FwdFn, typename BwdFn>
Var unary_elementwise(const char* op, const Var& a, FwdFn fwd, BwdFn dfn) {
  auto n = make_node(a.shape(), op);
  const int count = n->shape.numel();
  const double* av = a.value().data();
  double* out = n->value.data();
#pragma omp parallel for schedule(static) if (count >= kParallelCutoff)
  for (int k = 0; k < count; ++k) out[k] = fwd(av[k]);

  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [dfn](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      const int m = self.shape.numel();
      const double* g = self.grad.data();
      const double* x = pa.value.data();
      double* gx = pa.grad.data();
#pragma omp parallel for schedule(static) if (m >= kParallelCutoff)
      for (int k = 0; k < m; ++k) gx[k] += g[k] * dfn(x[k]);
    };
  }
  return Var(n);
}

}  // namespace

Var add(const Var& a, const Var& b) {
  check_same_shape("add", a, b);
  auto n = make_node(a.shape(), "add");
  const int count = n->shape.numel();
  for (int k = 0; k < count; ++k) n->value[k] = a.value()[k] + b.value()[k];
  if (any_requires_grad({&a, &b})) {
    n->requires_grad = true;
    n->parents = {a.node(), b.node()};
    n->backward_fn = [](Node& self) {
      for (int p = 0; p < 2; ++p) {
        Node& par = *self.parents[p];
        if (!par.requires_grad) continue;
        ensure_grad(par);
        const int m = self.shape.numel();
        for (int k = 0; k < m; ++k) par.grad[k] += self.grad[k];
      }
    };
  }
  return Var(n);
}

Var sub(const Var& a, const Var& b) {
  check_same_shape("sub", a, b);
  auto n = make_node(a.shape(), "sub");
  const int count = n->shape.numel();
  for (int k = 0; k < count; ++k) n->value[k] = a.value()[k] - b.value()[k];
  if (any_requires_grad({&a, &b})) {
    n->requires_grad = true;
    n->parents = {a.node(), b.node()};
    n->backward_fn = [](Node& self) {
      const int m = self.shape.numel();
      if (self.parents[0]->requires_grad) {
        Node& pa = *self.parents[0];
        ensure_grad(pa);
        for (int k = 0; k < m; ++k) pa.grad[k] += self.grad[k];
      }
      if (self.parents[1]->requires_grad) {
        Node& pb = *self.parents[1];
        ensure_grad(pb);
        for (int k = 0; k < m; ++k) pb.grad[k] -= self.grad[k];
      }
    };
  }
  return Var(n);
}

Var mul(const Var& a, const Var& b) {
  check_same_shape("mul", a, b);
  auto n = make_node(a.shape(), "mul");
  const int count = n->shape.numel();
  for (int k = 0; k < count; ++k) n->value[k] = a.value()[k] * b.value()[k];
  if (any_requires_grad({&a, &b})) {
    n->requires_grad = true;
    n->parents = {a.node(), b.node()};
    n->backward_fn = [](Node& self) {
      const int m = self.shape.numel();
      Node& pa = *self.parents[0];
      Node& pb = *self.parents[1];
      if (pa.requires_grad) {
        ensure_grad(pa);
        for (int k = 0; k < m; ++k) pa.grad[k] += self.grad[k] * pb.value[k];
      }
      if (pb.requires_grad) {
        ensure_grad(pb);
        for (int k = 0; k < m; ++k) pb.grad[k] += self.grad[k] * pa.value[k];
      }
    };
  }
  return Var(n);
}

Var add_scalar(const Var& a, double s) {
  return unary_elementwise("add_scalar", a,
                           [s](double x) { return x + s; },
                           [](double) { return 1.0; });
}

Var mul_scalar(const Var& a, double s) {
  return unary_elementwise("mul_scalar", a,
                           [s](double x) { return x * s; },
                           [s](double) { return s; });
}

Var vabs(const Var& a) {
  // subgradient at 0 chosen as 0
  return unary_elementwise("abs", a, [](double x) { return std::abs(x); },
                           [](double x) {
                             return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
                           });
}

Var relu(const Var& a) {
  return unary_elementwise("relu", a,
                           [](double x) { return x > 0.0 ? x : 0.0; },
                           [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(const Var& a, double slope) {
  return unary_elementwise("leaky_relu", a,
                           [slope](double x) { return x > 0.0 ? x : slope * x; },
                           [slope](double x) { return x > 0.0 ? 1.0 : slope; });
}

Var sigmoid(const Var& a) {
  return unary_elementwise(
      "sigmoid", a,
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double x) {
        const double s = 1.0 / (1.0 + std::exp(-x));
        return s * (1.0 - s);
      });
}

Var softplus(const Var& a) {
  // overflow-safe: softplus(x) = max(x,0) + log1p(exp(-|x|))
  return unary_elementwise(
      "softplus", a,
      [](double x) {
        return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::abs(x)));
      },
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); });
}

// --------------------------------------------------------------- structure

Var concat_channels(const Var& a, const Var& b) {
  check_rank3("concat_channels", a);
  check_rank3("concat_channels", b);
  if (a.shape()[1] != b.shape()[1] || a.shape()[2] != b.shape()[2])
    throw ShapeError("concat_channels: spatial mismatch " + a.shape().str() +
                     " vs " + b.shape().str());
  const int ca = a.shape()[0], cb = b.shape()[0];
  const int plane = a.shape()[1] * a.shape()[2];
  auto n = make_node(Shape{ca + cb, a.shape()[1], a.shape()[2]}, "concat");
  std::copy(a.value().begin(), a.value().end(), n->value.begin());
  std::copy(b.value().begin(), b.value().end(),
            n->value.begin() + static_cast<std::ptrdiff_t>(ca) * plane);
  if (any_requires_grad({&a, &b})) {
    n->requires_grad = true;
    n->parents = {a.node(), b.node()};
    n->backward_fn = [ca, plane](Node& self) {
      Node& pa = *self.parents[0];
      Node& pb = *self.parents[1];
      const std::size_t na = static_cast<std::size_t>(ca) * plane;
      if (pa.requires_grad) {
        ensure_grad(pa);
        for (std::size_t k = 0; k < na; ++k) pa.grad[k] += self.grad[k];
      }
      if (pb.requires_grad) {
        ensure_grad(pb);
        const std::size_t nb = pb.value.size();
        for (std::size_t k = 0; k < nb; ++k) pb.grad[k] += self.grad[na + k];
      }
    };
  }
  return Var(n);
}

Var channel_mean(const Var& a) {
  check_rank3("channel_mean", a);
  const int c = a.shape()[0], h = a.shape()[1], w = a.shape()[2];
  const int plane = h * w;
  auto n = make_node(Shape{1, h, w}, "channel_mean");
  const double inv_c = 1.0 / c;
  for (int k = 0; k < plane; ++k) {
    double acc = 0.0;
    for (int ch = 0; ch < c; ++ch)
      acc += a.value()[static_cast<std::size_t>(ch) * plane + k];
    n->value[k] = acc * inv_c;
  }
  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [c, plane, inv_c](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      for (int ch = 0; ch < c; ++ch)
        for (int k = 0; k < plane; ++k)
          pa.grad[static_cast<std::size_t>(ch) * plane + k] +=
              self.grad[k] * inv_c;
    };
  }
  return Var(n);
}

Var upsample2x_bilinear(const Var& a) {
  check_rank3("upsample2x", a);
  const int c = a.shape()[0], ih = a.shape()[1], iw = a.shape()[2];
  const int oh = 2 * ih, ow = 2 * iw;
  auto n = make_node(Shape{c, oh, ow}, "upsample2x");

  // source coordinate = dest / 2, edge-clamped (same rule as resize_bilinear)
  auto taps = [](int dst, int size) {
    double x = 0.5 * dst;
    const double mx = size - 1.0;
    if (x > mx) x = mx;
    const int lo = static_cast<int>(x);
    const int hi = lo + 1 < size ? lo + 1 : size - 1;
    return std::tuple<int, int, double>{lo, hi, x - lo};
  };

  for (int ch = 0; ch < c; ++ch)
    for (int oy = 0; oy < oh; ++oy) {
      auto [ylo, yhi, fy] = taps(oy, ih);
      for (int ox = 0; ox < ow; ++ox) {
        auto [xlo, xhi, fx] = taps(ox, iw);
        const double* p = a.value().data() + static_cast<std::size_t>(ch) * ih * iw;
        const double top = (1.0 - fx) * p[ylo * iw + xlo] + fx * p[ylo * iw + xhi];
        const double bot = (1.0 - fx) * p[yhi * iw + xlo] + fx * p[yhi * iw + xhi];
        n->value[(static_cast<std::size_t>(ch) * oh + oy) * ow + ox] =
            (1.0 - fy) * top + fy * bot;
      }
    }

  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [c, ih, iw, oh, ow, taps](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      for (int ch = 0; ch < c; ++ch)
        for (int oy = 0; oy < oh; ++oy) {
          auto [ylo, yhi, fy] = taps(oy, ih);
          for (int ox = 0; ox < ow; ++ox) {
            auto [xlo, xhi, fx] = taps(ox, iw);
            const double g =
                self.grad[(static_cast<std::size_t>(ch) * oh + oy) * ow + ox];
            double* gp = pa.grad.data() + static_cast<std::size_t>(ch) * ih * iw;
            gp[ylo * iw + xlo] += g * (1.0 - fy) * (1.0 - fx);
            gp[ylo * iw + xhi] += g * (1.0 - fy) * fx;
            gp[yhi * iw + xlo] += g * fy * (1.0 - fx);
            gp[yhi * iw + xhi] += g * fy * fx;
          }
        }
    };
  }
  return Var(n);
}

Var forward_diff_x(const Var& a) {
  check_rank3("forward_diff_x", a);
  const int c = a.shape()[0], h = a.shape()[1], w = a.shape()[2];
  if (w < 2) throw ShapeError("forward_diff_x: width < 2");
  auto n = make_node(Shape{c, h, w - 1}, "forward_diff_x");
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i < h; ++i)
      for (int j = 0; j + 1 < w; ++j)
        n->value[(static_cast<std::size_t>(ch) * h + i) * (w - 1) + j] =
            a.value()[(static_cast<std::size_t>(ch) * h + i) * w + j + 1] -
            a.value()[(static_cast<std::size_t>(ch) * h + i) * w + j];
  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [c, h, w](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      for (int ch = 0; ch < c; ++ch)
        for (int i = 0; i < h; ++i)
          for (int j = 0; j + 1 < w; ++j) {
            const double g =
                self.grad[(static_cast<std::size_t>(ch) * h + i) * (w - 1) + j];
            pa.grad[(static_cast<std::size_t>(ch) * h + i) * w + j + 1] += g;
            pa.grad[(static_cast<std::size_t>(ch) * h + i) * w + j] -= g;
          }
    };
  }
  return Var(n);
}

Var forward_diff_y(const Var& a) {
  check_rank3("forward_diff_y", a);
  const int c = a.shape()[0], h = a.shape()[1], w = a.shape()[2];
  if (h < 2) throw ShapeError("forward_diff_y: height < 2");
  auto n = make_node(Shape{c, h - 1, w}, "forward_diff_y");
  for (int ch = 0; ch < c; ++ch)
    for (int i = 0; i + 1 < h; ++i)
      for (int j = 0; j < w; ++j)
        n->value[(static_cast<std::size_t>(ch) * (h - 1) + i) * w + j] =
            a.value()[(static_cast<std::size_t>(ch) * h + i + 1) * w + j] -
            a.value()[(static_cast<std::size_t>(ch) * h + i) * w + j];
  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [c, h, w](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      for (int ch = 0; ch < c; ++ch)
        for (int i = 0; i + 1 < h; ++i)
          for (int j = 0; j < w; ++j) {
            const double g =
                self.grad[(static_cast<std::size_t>(ch) * (h - 1) + i) * w + j];
            pa.grad[(static_cast<std::size_t>(ch) * h + i + 1) * w + j] += g;
            pa.grad[(static_cast<std::size_t>(ch) * h + i) * w + j] -= g;
          }
    };
  }
  return Var(n);
}

// --------------------------------------------------------------- reductions

Var sum(const Var& a) {
  auto n = make_node(Shape{1}, "sum");
  double acc = 0.0;
  for (const double v : a.value()) acc += v;  // fixed row-major order
  n->value[0] = acc;
  if (a.requires_grad()) {
    n->requires_grad = true;
    n->parents = {a.node()};
    n->backward_fn = [](Node& self) {
      Node& pa = *self.parents[0];
      ensure_grad(pa);
      const double g = self.grad[0];
      for (double& v : pa.grad) v += g;
    };
  }
  return Var(n);
}

Var mean(const Var& a) {
  return mul_scalar(sum(a), 1.0 / a.shape().numel());
}

// ----------------------------------------------------------------- kernels

Var conv2d(const Var& x, const Var& w, const Var& b, int stride) {
  check_rank3("conv2d", x);
  if (stride != 1 && stride != 2)
    throw ShapeError("conv2d: stride must be 1 or 2");
  if (w.shape().rank() != 4 || w.shape()[2] != 3 || w.shape()[3] != 3 ||
      w.shape()[1] != x.shape()[0])
    throw ShapeError("conv2d: weight shape " + w.shape().str() +
                     " incompatible with input " + x.shape().str());
  if (b.shape().rank() != 1 || b.shape()[0] != w.shape()[0])
    throw ShapeError("conv2d: bias shape " + b.shape().str());

  kern::ConvDims d{x.shape()[0], x.shape()[1], x.shape()[2], w.shape()[0],
                   stride};
  auto n = make_node(Shape{d.oc, d.oh(), d.ow()}, "conv2d");
  kern::conv2d_fwd(x.value().data(), w.value().data(), b.value().data(),
                   n->value.data(), d);

  if (any_requires_grad({&x, &w, &b})) {
    n->requires_grad = true;
    n->parents = {x.node(), w.node(), b.node()};
    n->backward_fn = [d](Node& self) {
      Node& px = *self.parents[0];
      Node& pw = *self.parents[1];
      Node& pb = *self.parents[2];
      if (px.requires_grad) {
        ensure_grad(px);
        kern::conv2d_bwd_input(self.grad.data(), pw.value.data(),
                               px.grad.data(), d);
      }
      if (pw.requires_grad) {
        ensure_grad(pw);
        kern::conv2d_bwd_weight(self.grad.data(), px.value.data(),
                                pw.grad.data(), d);
      }
      if (pb.requires_grad) {
        ensure_grad(pb);
        kern::conv2d_bwd_bias(self.grad.data(), pb.grad.data(), d);
      }
    };
  }
  return Var(n);
}

Var deconv2d(const Var& x, const Var& w, const Var& b) {
  check_rank3("deconv2d", x);
  if (w.shape().rank() != 4 || w.shape()[2] != 4 || w.shape()[3] != 4 ||
      w.shape()[0] != x.shape()[0])
    throw ShapeError("deconv2d: weight shape " + w.shape().str() +
                     " incompatible with input " + x.shape().str());
  if (b.shape().rank() != 1 || b.shape()[0] != w.shape()[1])
    throw ShapeError("deconv2d: bias shape " + b.shape().str());

  kern::DeconvDims d{x.shape()[0], x.shape()[1], x.shape()[2], w.shape()[1]};
  auto n = make_node(Shape{d.oc, 2 * d.ih, 2 * d.iw}, "deconv2d");
  kern::deconv2d_fwd(x.value().data(), w.value().data(), b.value().data(),
                     n->value.data(), d);

  if (any_requires_grad({&x, &w, &b})) {
    n->requires_grad = true;
    n->parents = {x.node(), w.node(), b.node()};
    n->backward_fn = [d](Node& self) {
      Node& px = *self.parents[0];
      Node& pw = *self.parents[1];
      Node& pb = *self.parents[2];
      if (px.requires_grad) {
        ensure_grad(px);
        kern::deconv2d_bwd_input(self.grad.data(), pw.value.data(),
                                 px.grad.data(), d);
      }
      if (pw.requires_grad) {
        ensure_grad(pw);
        kern::deconv2d_bwd_weight(self.grad.data(), px.value.data(),
                                  pw.grad.data(), d);
      }
      if (pb.requires_grad) {
        ensure_grad(pb);
        kern::deconv2d_bwd_bias(self.grad.data(), pb.grad.data(), d);
      }
    };
  }
  return Var(n);
}

Var corr1d(const Var& left, const Var& right, int max_disp) {
  check_same_shape("corr1d", left, right);
  check_rank3("corr1d", left);
  const int c = left.shape()[0], h = left.shape()[1], w = left.shape()[2];
  if (max_disp < 0 || max_disp >= w)
    throw ShapeError("corr1d: max_disp " + std::to_string(max_disp) +
                     " out of range for width " + std::to_string(w));
  auto n = make_node(Shape{max_disp + 1, h, w}, "corr1d");
  kern::corr1d_fwd(left.value().data(), right.value().data(), n->value.data(),
                   c, h, w, max_disp);

  if (any_requires_grad({&left, &right})) {
    n->requires_grad = true;
    n->parents = {left.node(), right.node()};
    n->backward_fn = [c, h, w, max_disp](Node& self) {
      Node& pl = *self.parents[0];
      Node& pr = *self.parents[1];
      // the kernel fills both sides at once; give non-training sides a
      // scratch buffer
      std::vector<double> scratch;
      double* gl;
      double* gr;
      if (pl.requires_grad) {
        ensure_grad(pl);
        gl = pl.grad.data();
      } else {
        scratch.assign(pl.value.size(), 0.0);
        gl = scratch.data();
      }
      if (pr.requires_grad) {
        ensure_grad(pr);
        gr = pr.grad.data();
      } else {
        if (scratch.empty()) scratch.assign(pr.value.size(), 0.0);
        gr = scratch.data();
      }
      kern::corr1d_bwd(self.grad.data(), pl.value.data(), pr.value.data(), gl,
                       gr, c, h, w, max_disp);
    };
  }
  return Var(n);
}

Var warp_horizontal(const Var& img, const Var& disp) {
  check_rank3("warp_horizontal", img);
  if (disp.shape().rank() != 3 || disp.shape()[0] != 1 ||
      disp.shape()[1] != img.shape()[1] || disp.shape()[2] != img.shape()[2])
    throw ShapeError("warp_horizontal: disparity shape " + disp.shape().str() +
                     " incompatible with image " + img.shape().str());
  const int c = img.shape()[0], h = img.shape()[1], w = img.shape()[2];
  auto n = make_node(img.shape(), "warp");
  kern::warp_fwd(img.value().data(), disp.value().data(), n->value.data(), c,
                 h, w);

  if (any_requires_grad({&img, &disp})) {
    n->requires_grad = true;
    n->parents = {img.node(), disp.node()};
    n->backward_fn = [c, h, w](Node& self) {
      Node& pi = *self.parents[0];
      Node& pd = *self.parents[1];
      double* gimg = nullptr;
      double* gdisp = nullptr;
      if (pi.requires_grad) {
        ensure_grad(pi);
        gimg = pi.grad.data();
      }
      if (pd.requires_grad) {
        ensure_grad(pd);
        gdisp = pd.grad.data();
      }
      kern::warp_bwd(self.grad.data(), pi.value.data(), pd.value.data(), gimg,
                     gdisp, c, h, w);
    };
  }
  return Var(n);
}

Var bce(const Var& pred, const Var& target, double eps) {
  check_same_shape("bce", pred, target);
  auto n = make_node(Shape{1}, "bce");
  const int count = pred.shape().numel();
  const double inv_n = 1.0 / count;
  double acc = 0.0;
  for (int k = 0; k < count; ++k) {
    double p = pred.value()[k];
    if (p < eps) p = eps;
    if (p > 1.0 - eps) p = 1.0 - eps;
    const double t = target.value()[k];
    acc -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
  }
  n->value[0] = acc * inv_n;

  if (any_requires_grad({&pred, &target})) {
    n->requires_grad = true;
    n->parents = {pred.node(), target.node()};
    n->backward_fn = [count, inv_n, eps](Node& self) {
      Node& pp = *self.parents[0];
      Node& pt = *self.parents[1];
      const double g = self.grad[0] * inv_n;
      if (pp.requires_grad) {
        ensure_grad(pp);
        for (int k = 0; k < count; ++k) {
          const double p = pp.value[k];
          if (p <= eps || p >= 1.0 - eps) continue;  // clamp region is flat
          const double t = pt.value[k];
          pp.grad[k] += g * (-t / p + (1.0 - t) / (1.0 - p));
        }
      }
      if (pt.requires_grad) {
        ensure_grad(pt);
        for (int k = 0; k < count; ++k) {
          double p = pp.value[k];
          if (p < eps) p = eps;
          if (p > 1.0 - eps) p = 1.0 - eps;
          pt.grad[k] += g * (std::log(1.0 - p) - std::log(p));
        }
      }
    };
  }
  return Var(n);
}

}  // namespace sdd
