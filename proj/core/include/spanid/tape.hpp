#ifndef SPANID_TAPE_HPP_
#define SPANID_TAPE_HPP_

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "spanid/rng.hpp"

namespace spanid::nn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Learnable array with a persistent gradient accumulator. Vector-shaped
/// parameters are stored as n x 1 matrices.
struct Param {
  std::string name;
  Mat value;
  Mat grad;

  Param() = default;
  Param(std::string n, int rows, int cols)
      : name(std::move(n)), value(Mat::Zero(rows, cols)), grad(Mat::Zero(rows, cols)) {}

  int rows() const { return static_cast<int>(value.rows()); }
  int cols() const { return static_cast<int>(value.cols()); }
  void zero_grad() { grad.setZero(); }
};

/// Handle to a tape node; scalars are 1-dimensional vectors.
struct Var {
  int id = -1;
};

/// Reverse-mode tape over vector-valued nodes. Build a graph forward, then
/// call backward() on a scalar node; parameter gradients accumulate into
/// Param::grad. One tape per training example/batch, cleared afterwards.
class Tape {
 public:
  Tape() { nodes_.reserve(4096); }

  // --- leaves ---
  Var constant(Vec v);
  Var scalar(double v);

  // --- parameterized ops ---
  Var lookup(Param& table, int row);          // table row as a column vector
  Var affine(Param& w, Var x, Param& b);      // w * x + b

  // --- structural ops ---
  Var concat2(Var a, Var b);
  Var concat3(Var a, Var b, Var c);
  Var slice(Var x, int offset, int len);
  Var maxpool(const std::vector<Var>& xs);    // elementwise max, first-argmax ties

  // --- elementwise ops ---
  Var add(Var a, Var b);
  Var hadamard(Var a, Var b);
  Var sigmoid(Var x);
  Var tanh(Var x);
  Var gelu(Var x);                            // exact Gaussian-CDF form
  Var softmax(Var x);
  Var dropout(Var x, double rate, Rng& rng);  // inverted dropout

  // --- scalar ops (1-dim vars) ---
  Var pick(Var x, int i);
  Var s_add(Var a, Var b);
  Var s_sub(Var a, Var b);
  Var s_mul(Var a, Var b);
  Var s_div(Var a, Var b);
  Var s_scale(Var x, double c);
  Var s_offset(Var x, double c);              // x + c
  Var s_sub_from(double c, Var x);            // c - x
  Var s_min(Var a, Var b);
  Var s_max(Var a, Var b);
  Var s_clamp(Var x, double lo, double hi);   // zero gradient outside [lo, hi]
  Var s_log(Var x);                           // argument must stay positive
  Var s_pow(Var x, double e);
  Var smooth_l1(Var pred, double target);     // beta = 1 transition
  Var s_sum(const std::vector<Var>& xs);

  // --- access ---
  const Vec& vec(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].val; }
  double value(Var v) const { return vec(v)(0); }
  const Vec& grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].grad; }
  int size(Var v) const { return static_cast<int>(vec(v).size()); }
  std::size_t node_count() const { return nodes_.size(); }

  /// Seeds d(loss)/d(loss) = 1 and runs all backward closures in reverse
  /// order. loss must be scalar.
  void backward(Var loss);

  void clear() { nodes_.clear(); }

 private:
  struct Node {
    Vec val;
    Vec grad;
    std::function<void(Tape&)> back;
  };

  Var push(Vec val, std::function<void(Tape&)> back = nullptr);
  Vec& grad_mut(Var v) { return nodes_[static_cast<std::size_t>(v.id)].grad; }

  std::vector<Node> nodes_;
};

/// Exact GELU and its derivative (shared with head math).
double gelu_value(double x);
double gelu_derivative(double x);

}  // namespace spanid::nn

#endif  // SPANID_TAPE_HPP_
