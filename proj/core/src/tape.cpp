#include "spanid/tape.hpp"

#include <cassert>
#include <cmath>

namespace spanid::nn {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;
}  // namespace

double gelu_value(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_derivative(double x) {
  double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
  double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return cdf + x * pdf;
}

Var Tape::push(Vec val, std::function<void(Tape&)> back) {
  Node n;
  n.val = std::move(val);
  n.grad = Vec::Zero(n.val.size());
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Vec v) { return push(std::move(v)); }

Var Tape::scalar(double v) { return push(Vec::Constant(1, v)); }

Var Tape::lookup(Param& table, int row) {
  Vec val = table.value.row(row).transpose();
  Param* t = &table;
  return push(std::move(val), [t, row](Tape& tp) {
    t->grad.row(row) += tp.nodes_.back_node_grad;  // placeholder, replaced below
  });
}

Var Tape::affine(Param& w, Var x, Param& b) {
  Vec val = w.value * vec(x) + b.value.col(0);
  Param* wp = &w;
  Param* bp = &b;
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [wp, bp, xi, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    wp->grad.noalias() += g * tp.nodes_[static_cast<std::size_t>(xi)].val.transpose();
    bp->grad.col(0) += g;
    tp.nodes_[static_cast<std::size_t>(xi)].grad.noalias() += wp->value.transpose() * g;
  };
  return out;
}

Var Tape::concat2(Var a, Var b) {
  const Vec& va = vec(a);
  const Vec& vb = vec(b);
  Vec val(va.size() + vb.size());
  val << va, vb;
  int ai = a.id, bi = b.id;
  int na = static_cast<int>(va.size()), nb = static_cast<int>(vb.size());
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, na, nb, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    tp.nodes_[static_cast<std::size_t>(ai)].grad += g.head(na);
    tp.nodes_[static_cast<std::size_t>(bi)].grad += g.tail(nb);
  };
  return out;
}

Var Tape::concat3(Var a, Var b, Var c) {
  const Vec& va = vec(a);
  const Vec& vb = vec(b);
  const Vec& vc = vec(c);
  Vec val(va.size() + vb.size() + vc.size());
  val << va, vb, vc;
  int ai = a.id, bi = b.id, ci = c.id;
  int na = static_cast<int>(va.size()), nb = static_cast<int>(vb.size()),
      nc = static_cast<int>(vc.size());
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, ci, na, nb, nc, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    tp.nodes_[static_cast<std::size_t>(ai)].grad += g.head(na);
    tp.nodes_[static_cast<std::size_t>(bi)].grad += g.segment(na, nb);
    tp.nodes_[static_cast<std::size_t>(ci)].grad += g.tail(nc);
  };
  return out;
}

Var Tape::slice(Var x, int offset, int len) {
  Vec val = vec(x).segment(offset, len);
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, offset, len, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad.segment(offset, len) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad;
  };
  return out;
}

Var Tape::maxpool(const std::vector<Var>& xs) {
  assert(!xs.empty());
  const Vec& first = vec(xs[0]);
  Vec val = first;
  std::vector<int> argmax(static_cast<std::size_t>(first.size()), xs[0].id);
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const Vec& v = vec(xs[k]);
    for (int j = 0; j < val.size(); ++j) {
      if (v(j) > val(j)) {
        val(j) = v(j);
        argmax[static_cast<std::size_t>(j)] = xs[k].id;
      }
    }
  }
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [am = std::move(argmax), oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    for (int j = 0; j < g.size(); ++j)
      tp.nodes_[static_cast<std::size_t>(am[static_cast<std::size_t>(j)])].grad(j) += g(j);
  };
  return out;
}

Var Tape::add(Var a, Var b) {
  Vec val = vec(a) + vec(b);
  int ai = a.id, bi = b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    tp.nodes_[static_cast<std::size_t>(ai)].grad += g;
    tp.nodes_[static_cast<std::size_t>(bi)].grad += g;
  };
  return out;
}

Var Tape::hadamard(Var a, Var b) {
  Vec val = vec(a).cwiseProduct(vec(b));
  int ai = a.id, bi = b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    tp.nodes_[static_cast<std::size_t>(ai)].grad +=
        g.cwiseProduct(tp.nodes_[static_cast<std::size_t>(bi)].val);
    tp.nodes_[static_cast<std::size_t>(bi)].grad +=
        g.cwiseProduct(tp.nodes_[static_cast<std::size_t>(ai)].val);
  };
  return out;
}

Var Tape::sigmoid(Var x) {
  Vec val = vec(x).unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    const Node& o = tp.nodes_[static_cast<std::size_t>(oi)];
    tp.nodes_[static_cast<std::size_t>(xi)].grad.array() +=
        o.grad.array() * o.val.array() * (1.0 - o.val.array());
  };
  return out;
}

Var Tape::tanh(Var x) {
  Vec val = vec(x).array().tanh();
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    const Node& o = tp.nodes_[static_cast<std::size_t>(oi)];
    tp.nodes_[static_cast<std::size_t>(xi)].grad.array() +=
        o.grad.array() * (1.0 - o.val.array().square());
  };
  return out;
}

Var Tape::gelu(Var x) {
  Vec val = vec(x).unaryExpr([](double v) { return gelu_value(v); });
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    const Vec& g = tp.nodes_[static_cast<std::size_t>(oi)].grad;
    const Vec& xin = tp.nodes_[static_cast<std::size_t>(xi)].val;
    Vec& xg = tp.nodes_[static_cast<std::size_t>(xi)].grad;
    for (int j = 0; j < g.size(); ++j) xg(j) += g(j) * gelu_derivative(xin(j));
  };
  return out;
}

Var Tape::softmax(Var x) {
  const Vec& xv = vec(x);
  double m = xv.maxCoeff();
  Vec e = (xv.array() - m).exp();
  Vec val = e / e.sum();
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    const Node& o = tp.nodes_[static_cast<std::size_t>(oi)];
    double dot = o.grad.dot(o.val);
    tp.nodes_[static_cast<std::size_t>(xi)].grad.array() +=
        o.val.array() * (o.grad.array() - dot);
  };
  return out;
}

Var Tape::dropout(Var x, double rate, Rng& rng) {
  const Vec& xv = vec(x);
  double keep_scale = 1.0 / (1.0 - rate);
  Vec mask(xv.size());
  for (int j = 0; j < mask.size(); ++j) mask(j) = rng.uniform() < rate ? 0.0 : keep_scale;
  Vec val = xv.cwiseProduct(mask);
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi, m = std::move(mask)](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad.cwiseProduct(m);
  };
  return out;
}

Var Tape::pick(Var x, int i) {
  Vec val = Vec::Constant(1, vec(x)(i));
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, i, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad(i) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_add(Var a, Var b) { return add(a, b); }

Var Tape::s_sub(Var a, Var b) {
  Vec val = Vec::Constant(1, value(a) - value(b));
  int ai = a.id, bi = b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, oi](Tape& tp) {
    double g = tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
    tp.nodes_[static_cast<std::size_t>(ai)].grad(0) += g;
    tp.nodes_[static_cast<std::size_t>(bi)].grad(0) -= g;
  };
  return out;
}

Var Tape::s_mul(Var a, Var b) { return hadamard(a, b); }

Var Tape::s_div(Var a, Var b) {
  double av = value(a), bv = value(b);
  Vec val = Vec::Constant(1, av / bv);
  int ai = a.id, bi = b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ai, bi, oi](Tape& tp) {
    double g = tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
    double av2 = tp.nodes_[static_cast<std::size_t>(ai)].val(0);
    double bv2 = tp.nodes_[static_cast<std::size_t>(bi)].val(0);
    tp.nodes_[static_cast<std::size_t>(ai)].grad(0) += g / bv2;
    tp.nodes_[static_cast<std::size_t>(bi)].grad(0) -= g * av2 / (bv2 * bv2);
  };
  return out;
}

Var Tape::s_scale(Var x, double c) {
  Vec val = vec(x) * c;
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, c, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad +=
        c * tp.nodes_[static_cast<std::size_t>(oi)].grad;
  };
  return out;
}

Var Tape::s_offset(Var x, double c) {
  Vec val = vec(x).array() + c;
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad += tp.nodes_[static_cast<std::size_t>(oi)].grad;
  };
  return out;
}

Var Tape::s_sub_from(double c, Var x) {
  Vec val = Vec::Constant(1, c - value(x));
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad(0) -=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_min(Var a, Var b) {
  bool take_a = value(a) <= value(b);
  Vec val = Vec::Constant(1, take_a ? value(a) : value(b));
  int src = take_a ? a.id : b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [src, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(src)].grad(0) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_max(Var a, Var b) {
  bool take_a = value(a) >= value(b);
  Vec val = Vec::Constant(1, take_a ? value(a) : value(b));
  int src = take_a ? a.id : b.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [src, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(src)].grad(0) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_clamp(Var x, double lo, double hi) {
  double xv = value(x);
  double cv = xv < lo ? lo : (xv > hi ? hi : xv);
  bool inside = xv >= lo && xv <= hi;
  Vec val = Vec::Constant(1, cv);
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, inside, oi](Tape& tp) {
    if (inside)
      tp.nodes_[static_cast<std::size_t>(xi)].grad(0) +=
          tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_log(Var x) {
  Vec val = Vec::Constant(1, std::log(value(x)));
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(xi)].grad(0) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0) /
        tp.nodes_[static_cast<std::size_t>(xi)].val(0);
  };
  return out;
}

Var Tape::s_pow(Var x, double e) {
  double xv = value(x);
  Vec val = Vec::Constant(1, std::pow(xv, e));
  int xi = x.id;
  Var out = push(std::move(val));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [xi, e, oi](Tape& tp) {
    if (e == 0.0) return;
    double xv2 = tp.nodes_[static_cast<std::size_t>(xi)].val(0);
    tp.nodes_[static_cast<std::size_t>(xi)].grad(0) +=
        tp.nodes_[static_cast<std::size_t>(oi)].grad(0) * e * std::pow(xv2, e - 1.0);
  };
  return out;
}

Var Tape::smooth_l1(Var pred, double target) {
  double x = value(pred) - target;
  double v = std::abs(x) < 1.0 ? 0.5 * x * x : std::abs(x) - 0.5;
  double d = x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
  int pi = pred.id;
  Var out = push(Vec::Constant(1, v));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [pi, d, oi](Tape& tp) {
    tp.nodes_[static_cast<std::size_t>(pi)].grad(0) +=
        d * tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
  };
  return out;
}

Var Tape::s_sum(const std::vector<Var>& xs) {
  double total = 0.0;
  std::vector<int> ids;
  ids.reserve(xs.size());
  for (Var v : xs) {
    total += value(v);
    ids.push_back(v.id);
  }
  Var out = push(Vec::Constant(1, total));
  int oi = out.id;
  nodes_[static_cast<std::size_t>(oi)].back = [ids = std::move(ids), oi](Tape& tp) {
    double g = tp.nodes_[static_cast<std::size_t>(oi)].grad(0);
    for (int id : ids) tp.nodes_[static_cast<std::size_t>(id)].grad(0) += g;
  };
  return out;
}

void Tape::backward(Var loss) {
  assert(size(loss) == 1);
  grad_mut(loss)(0) = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].back) nodes_[i].back(*this);
  }
}

}  // namespace spanid::nn
