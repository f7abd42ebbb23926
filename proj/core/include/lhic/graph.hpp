#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "lhic/conv_kernels.hpp"
#include "lhic/rounding.hpp"
#include "lhic/tensor.hpp"

namespace lhic::nn {

// Reverse-mode tape. Each op appends a node with a backward closure;
// backward() walks the tape once in reverse. One graph per forward pass.
template <typename T>
class Graph {
 public:
  struct ValueId {
    int idx = -1;
    bool valid() const { return idx >= 0; }
  };

  ValueId input(Tensor<T> v) { return push(std::move(v), false, "input", {}); }
  ValueId param(Tensor<T> v) { return push(std::move(v), true, "param", {}); }

  ValueId conv2d(ValueId x, ValueId w, ValueId b, int stride) {
    const Tensor<T>& xv = val(x);
    const Tensor<T>& wv = val(w);
    const Tensor<T>& bv = val(b);
    Tensor<T> y = detail::conv_gather(xv, wv, stride);
    if (bv.shape != std::vector<int>{wv.shape[0]})
      throw Error(ErrorKind::Shape, "conv bias shape " + bv.shape_str() +
                                        " does not match out channels");
    add_bias(y, bv);
    ValueId out = push(std::move(y), false, "conv2d", {x, w, b});
    node(out).back = [x, w, b, out, stride](Graph& g) {
      const Tensor<T>& gy = g.grad_ref(out);
      if (g.node(x).requires_grad)
        g.accumulate(x, detail::scatter_adjoint(gy, g.val(w), stride));
      if (g.node(w).requires_grad)
        g.accumulate(w, detail::conv_weight_grad(g.val(x), gy, stride));
      if (g.node(b).requires_grad) g.accumulate(b, detail::channel_sum(gy));
    };
    return out;
  }

  // Transposed convolution; weight layout [in_channels][out_channels][3][3].
  ValueId deconv2d(ValueId x, ValueId w, ValueId b, int stride) {
    const Tensor<T>& xv = val(x);
    const Tensor<T>& wv = val(w);
    const Tensor<T>& bv = val(b);
    Tensor<T> y = detail::scatter_adjoint(xv, wv, stride);
    if (bv.shape != std::vector<int>{wv.shape[1]})
      throw Error(ErrorKind::Shape, "deconv bias shape " + bv.shape_str() +
                                        " does not match out channels");
    add_bias(y, bv);
    ValueId out = push(std::move(y), false, "deconv2d", {x, w, b});
    node(out).back = [x, w, b, out, stride](Graph& g) {
      const Tensor<T>& gy = g.grad_ref(out);
      if (g.node(x).requires_grad)
        g.accumulate(x, detail::conv_gather(gy, g.val(w), stride));
      if (g.node(w).requires_grad)
        g.accumulate(w, detail::deconv_weight_grad(g.val(x), gy, stride));
      if (g.node(b).requires_grad) g.accumulate(b, detail::channel_sum(gy));
    };
    return out;
  }

  ValueId relu(ValueId x) {
    Tensor<T> y = val(x);
    for (T& v : y.data) v = v > 0 ? v : T(0);
    ValueId out = push(std::move(y), false, "relu", {x});
    node(out).back = [x, out](Graph& g) {
      if (!g.node(x).requires_grad) return;
      const Tensor<T>& xv = g.val(x);
      const Tensor<T>& gy = g.grad_ref(out);
      Tensor<T> gx = Tensor<T>::zeros(xv.shape);
      for (size_t i = 0; i < gx.data.size(); ++i)
        gx.data[i] = xv.data[i] > 0 ? gy.data[i] : T(0);
      g.accumulate(x, std::move(gx));
    };
    return out;
  }

  // a holds one learned slope per channel (length C of an NCHW input).
  ValueId prelu(ValueId x, ValueId a) {
    const Tensor<T>& xv = val(x);
    const Tensor<T>& av = val(a);
    if (xv.shape.size() != 4 || av.shape != std::vector<int>{xv.shape[1]})
      throw Error(ErrorKind::Shape, "prelu slope shape " + av.shape_str() +
                                        " does not match channels of " + xv.shape_str());
    Tensor<T> y = xv;
    const int C = xv.shape[1];
    const std::int64_t chw = static_cast<std::int64_t>(xv.shape[2]) * xv.shape[3];
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(y.data.size()); ++i) {
      const int c = static_cast<int>((i / chw) % C);
      if (y.data[i] < 0) y.data[i] *= av.data[c];
    }
    ValueId out = push(std::move(y), false, "prelu", {x, a});
    node(out).back = [x, a, out, C, chw](Graph& g) {
      const Tensor<T>& xv2 = g.val(x);
      const Tensor<T>& av2 = g.val(a);
      const Tensor<T>& gy = g.grad_ref(out);
      if (g.node(x).requires_grad) {
        Tensor<T> gx = Tensor<T>::zeros(xv2.shape);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(gx.data.size()); ++i) {
          const int c = static_cast<int>((i / chw) % C);
          gx.data[i] = xv2.data[i] > 0 ? gy.data[i] : gy.data[i] * av2.data[c];
        }
        g.accumulate(x, std::move(gx));
      }
      if (g.node(a).requires_grad) {
        Tensor<T> ga = Tensor<T>::zeros({C});
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(xv2.data.size()); ++i) {
          if (xv2.data[i] < 0) {
            const int c = static_cast<int>((i / chw) % C);
            ga.data[c] += gy.data[i] * xv2.data[i];
          }
        }
        g.accumulate(a, std::move(ga));
      }
    };
    return out;
  }

  ValueId tanh_op(ValueId x) {
    Tensor<T> y = val(x);
    for (T& v : y.data) v = std::tanh(v);
    ValueId out = push(std::move(y), false, "tanh", {x});
    node(out).back = [x, out](Graph& g) {
      if (!g.node(x).requires_grad) return;
      const Tensor<T>& yv = g.val(out);
      const Tensor<T>& gy = g.grad_ref(out);
      Tensor<T> gx = Tensor<T>::zeros(yv.shape);
      for (size_t i = 0; i < gx.data.size(); ++i)
        gx.data[i] = gy.data[i] * (T(1) - yv.data[i] * yv.data[i]);
      g.accumulate(x, std::move(gx));
    };
    return out;
  }

  // Inverted dropout: survivors scaled by 1/(1-p); identity at inference.
  ValueId dropout(ValueId x, double p, bool training, std::uint64_t seed) {
    if (p < 0 || p >= 1)
      throw Error(ErrorKind::Usage, "dropout p must be in [0,1)");
    if (!training || p == 0) {
      Tensor<T> y = val(x);
      ValueId out = push(std::move(y), false, "dropout", {x});
      node(out).back = [x, out](Graph& g) {
        if (g.node(x).requires_grad) g.accumulate(x, g.grad_ref(out));
      };
      return out;
    }
    const Tensor<T>& xv = val(x);
    auto mask = std::make_shared<std::vector<T>>(xv.data.size());
    std::mt19937_64 rng(seed);
    const T scale = T(1) / T(1 - p);
    const std::uint64_t cutoff =
        static_cast<std::uint64_t>(p * 18446744073709551615.0);
    for (size_t i = 0; i < mask->size(); ++i)
      (*mask)[i] = rng() < cutoff ? T(0) : scale;
    Tensor<T> y = xv;
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] *= (*mask)[i];
    ValueId out = push(std::move(y), false, "dropout", {x});
    node(out).back = [x, out, mask](Graph& g) {
      if (!g.node(x).requires_grad) return;
      const Tensor<T>& gy = g.grad_ref(out);
      Tensor<T> gx = Tensor<T>::zeros(gy.shape);
      for (size_t i = 0; i < gx.data.size(); ++i)
        gx.data[i] = gy.data[i] * (*mask)[i];
      g.accumulate(x, std::move(gx));
    };
    return out;
  }

  ValueId add(ValueId a, ValueId b) {
    const Tensor<T>& av = val(a);
    const Tensor<T>& bv = val(b);
    if (!av.same_shape(bv))
      throw Error(ErrorKind::Shape,
                  "add shape mismatch " + av.shape_str() + " vs " + bv.shape_str());
    Tensor<T> y = av;
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] += bv.data[i];
    ValueId out = push(std::move(y), false, "add", {a, b});
    node(out).back = [a, b, out](Graph& g) {
      if (g.node(a).requires_grad) g.accumulate(a, g.grad_ref(out));
      if (g.node(b).requires_grad) g.accumulate(b, g.grad_ref(out));
    };
    return out;
  }

  ValueId mul(ValueId a, ValueId b) {
    const Tensor<T>& av = val(a);
    const Tensor<T>& bv = val(b);
    if (!av.same_shape(bv))
      throw Error(ErrorKind::Shape,
                  "mul shape mismatch " + av.shape_str() + " vs " + bv.shape_str());
    Tensor<T> y = av;
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] *= bv.data[i];
    ValueId out = push(std::move(y), false, "mul", {a, b});
    node(out).back = [a, b, out](Graph& g) {
      const Tensor<T>& gy = g.grad_ref(out);
      if (g.node(a).requires_grad) {
        Tensor<T> ga = g.val(b);
        for (size_t i = 0; i < ga.data.size(); ++i) ga.data[i] *= gy.data[i];
        g.accumulate(a, std::move(ga));
      }
      if (g.node(b).requires_grad) {
        Tensor<T> gb = g.val(a);
        for (size_t i = 0; i < gb.data.size(); ++i) gb.data[i] *= gy.data[i];
        g.accumulate(b, std::move(gb));
      }
    };
    return out;
  }

  // Hard 8-bit quantization of a [-1,1] code with a straight-through
  // backward pass. Values outside [-1,1] are clamped and counted.
  ValueId fake_quant_u8(ValueId x) {
    Tensor<T> y = val(x);
    for (T& v : y.data) {
      T c = v;
      if (c < T(-1)) { c = T(-1); ++ste_clamp_count_; }
      if (c > T(1)) { c = T(1); ++ste_clamp_count_; }
      const long q = round_half_away((double(c) + 1.0) / 2.0 * 255.0);
      v = T(q / 255.0 * 2.0 - 1.0);
    }
    ValueId out = push(std::move(y), false, "fake_quant_u8", {x});
    node(out).back = [x, out](Graph& g) {
      if (g.node(x).requires_grad) g.accumulate(x, g.grad_ref(out));
    };
    return out;
  }

  // Mean squared error over every element.
  ValueId mse_loss(ValueId y, ValueId x) {
    const Tensor<T>& yv = val(y);
    const Tensor<T>& xv = val(x);
    if (!yv.same_shape(xv))
      throw Error(ErrorKind::Shape, "mse shape mismatch " + yv.shape_str() +
                                        " vs " + xv.shape_str());
    T acc = 0;
    for (size_t i = 0; i < yv.data.size(); ++i) {
      const T d = yv.data[i] - xv.data[i];
      acc += d * d;
    }
    const T n = static_cast<T>(yv.data.size());
    Tensor<T> loss = Tensor<T>::from({1}, {acc / n});
    ValueId out = push(std::move(loss), false, "mse_loss", {y, x});
    node(out).back = [y, x, out, n](Graph& g) {
      const T gl = g.grad_ref(out).data[0];
      const Tensor<T>& yv2 = g.val(y);
      const Tensor<T>& xv2 = g.val(x);
      if (g.node(y).requires_grad) {
        Tensor<T> gy = Tensor<T>::zeros(yv2.shape);
        for (size_t i = 0; i < gy.data.size(); ++i)
          gy.data[i] = gl * T(2) * (yv2.data[i] - xv2.data[i]) / n;
        g.accumulate(y, std::move(gy));
      }
      if (g.node(x).requires_grad) {
        Tensor<T> gx = Tensor<T>::zeros(xv2.shape);
        for (size_t i = 0; i < gx.data.size(); ++i)
          gx.data[i] = gl * T(-2) * (yv2.data[i] - xv2.data[i]) / n;
        g.accumulate(x, std::move(gx));
      }
    };
    return out;
  }

  ValueId sum(ValueId x) {
    const Tensor<T>& xv = val(x);
    T acc = 0;
    for (T v : xv.data) acc += v;
    ValueId out = push(Tensor<T>::from({1}, {acc}), false, "sum", {x});
    node(out).back = [x, out](Graph& g) {
      if (!g.node(x).requires_grad) return;
      const T gl = g.grad_ref(out).data[0];
      g.accumulate(x, Tensor<T>::full(g.val(x).shape, gl));
    };
    return out;
  }

  void backward(ValueId loss) {
    if (!loss.valid() || loss.idx >= static_cast<int>(nodes_.size()))
      throw Error(ErrorKind::Usage, "backward called without a recorded forward pass");
    if (val(loss).numel() != 1)
      throw Error(ErrorKind::Shape, "backward requires a scalar loss");
    for (auto& nd : nodes_) nd.grad = Tensor<T>();
    node(loss).grad = Tensor<T>::from({1}, {T(1)});
    for (int i = loss.idx; i >= 0; --i) {
      Node& nd = nodes_[static_cast<size_t>(i)];
      if (nd.grad.data.empty() || !nd.back) continue;
      nd.back(*this);
    }
    backward_run_ = true;
  }

  const Tensor<T>& value(ValueId id) const { return val(id); }

  // Gradient of a node; zero tensor if the node was never reached.
  Tensor<T> gradient(ValueId id) const {
    if (!backward_run_)
      throw Error(ErrorKind::Usage, "gradient requested before backward");
    const Node& nd = cnode(id);
    if (nd.grad.data.empty()) return Tensor<T>::zeros(nd.val.shape);
    return nd.grad;
  }

  std::uint64_t ste_clamp_count() const { return ste_clamp_count_; }

  // Introspection for structural tests.
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::string& op_name(int idx) const { return nodes_[static_cast<size_t>(idx)].op; }
  const std::vector<int>& parents(int idx) const { return nodes_[static_cast<size_t>(idx)].parents; }

 private:
  struct Node {
    Tensor<T> val;
    Tensor<T> grad;
    std::function<void(Graph&)> back;
    bool requires_grad = false;
    std::string op;
    std::vector<int> parents;
  };

  ValueId push(Tensor<T> v, bool rg, std::string op, std::vector<ValueId> parents) {
    Node nd;
    nd.val = std::move(v);
    nd.requires_grad = rg;
    nd.op = std::move(op);
    for (ValueId p : parents) {
      nd.parents.push_back(p.idx);
      if (cnode(p).requires_grad) nd.requires_grad = true;
    }
    nodes_.push_back(std::move(nd));
    return ValueId{static_cast<int>(nodes_.size()) - 1};
  }

  Node& node(ValueId id) { return nodes_.at(static_cast<size_t>(id.idx)); }
  const Node& cnode(ValueId id) const { return nodes_.at(static_cast<size_t>(id.idx)); }
  const Tensor<T>& val(ValueId id) const { return cnode(id).val; }
  const Tensor<T>& grad_ref(ValueId id) const { return cnode(id).grad; }

  void accumulate(ValueId id, Tensor<T> g) {
    Node& nd = node(id);
    if (nd.grad.data.empty()) {
      nd.grad = std::move(g);
    } else {
      for (size_t i = 0; i < nd.grad.data.size(); ++i)
        nd.grad.data[i] += g.data[i];
    }
  }

  static void add_bias(Tensor<T>& y, const Tensor<T>& b) {
    const int C = y.shape[1];
    const std::int64_t chw = static_cast<std::int64_t>(y.shape[2]) * y.shape[3];
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(y.data.size()); ++i)
      y.data[i] += b.data[static_cast<size_t>((i / chw) % C)];
  }

  std::vector<Node> nodes_;
  bool backward_run_ = false;
  std::uint64_t ste_clamp_count_ = 0;
};

}  // namespace lhic::nn
