#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sdd/errors.hpp"

namespace sdd {

// Define-by-run reverse-mode graph over float64 tensors.
//
// Every operation allocates a fresh node holding the forward value and a
// closure that routes the node's gradient to its parents. backward() runs
// the closures in reverse topological order. Summation order inside each
// closure is fixed, so gradients are bit-reproducible for any thread count.

struct Shape {
  std::vector<int> dims;

  Shape() = default;
  Shape(std::initializer_list<int> d) : dims(d) {}
  explicit Shape(std::vector<int> d) : dims(std::move(d)) {}

  int numel() const {
    int n = 1;
    for (int d : dims) n *= d;
    return n;
  }
  int rank() const { return static_cast<int>(dims.size()); }
  int operator[](int i) const { return dims[i]; }
  bool operator==(const Shape& o) const { return dims == o.dims; }
  std::string str() const;
};

class Node;
using NodePtr = std::shared_ptr<Node>;

class Node {
 public:
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated during backward
  bool requires_grad = false;
  std::vector<NodePtr> parents;
  std::function<void(Node&)> backward_fn;
  const char* op = "leaf";
};

// Value-semantic handle to a graph node.
class Var {
 public:
  Var() = default;
  explicit Var(NodePtr n) : node_(std::move(n)) {}

  static Var constant(Shape shape, std::vector<double> values);
  static Var leaf(Shape shape, std::vector<double> values);  // trainable

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  std::vector<double>& value() { return node_->value; }
  const std::vector<double>& value() const { return node_->value; }
  const std::vector<double>& grad() const;
  bool requires_grad() const { return node_->requires_grad; }
  double scalar() const;

  NodePtr node() const { return node_; }

 private:
  NodePtr node_;
};

// Runs reverse-mode accumulation from a scalar node (seeds gradient 1).
void backward(const Var& loss);

// ----- elementwise -----
Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var add_scalar(const Var& a, double s);
Var mul_scalar(const Var& a, double s);
Var vabs(const Var& a);
Var relu(const Var& a);
Var leaky_relu(const Var& a, double slope = 0.1);
Var sigmoid(const Var& a);
Var softplus(const Var& a);

// ----- structure -----
Var concat_channels(const Var& a, const Var& b);  // {Ca,H,W}+{Cb,H,W}
Var channel_mean(const Var& a);                   // {C,H,W} -> {1,H,W}
Var upsample2x_bilinear(const Var& a);            // {C,H,W} -> {C,2H,2W}
Var forward_diff_x(const Var& a);                 // {C,H,W} -> {C,H,W-1}
Var forward_diff_y(const Var& a);                 // {C,H,W} -> {C,H-1,W}

// ----- reductions (row-major accumulation) -----
Var sum(const Var& a);   // -> {1}
Var mean(const Var& a);  // -> {1}

// ----- network kernels -----
// x {IC,H,W}, w {OC,IC,3,3}, b {OC}; zero padding 1; stride 1 or 2.
Var conv2d(const Var& x, const Var& w, const Var& b, int stride);
// 4x4 stride-2 transposed conv, padding 1: {IC,H,W} -> {OC,2H,2W};
// w {IC,OC,4,4}, b {OC}.
Var deconv2d(const Var& x, const Var& w, const Var& b);
// Horizontal cost volume: {C,H,W} x {C,H,W} -> {max_disp+1,H,W}.
Var corr1d(const Var& left, const Var& right, int max_disp);
// Differentiable horizontal warp: img {C,H,W}, disp {1,H,W} -> {C,H,W}.
Var warp_horizontal(const Var& img, const Var& disp);

// Binary cross-entropy with epsilon clamping, mean over all elements.
Var bce(const Var& pred, const Var& target, double eps = 1e-7);

}  // namespace sdd
