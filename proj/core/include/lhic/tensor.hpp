#pragma once

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "lhic/error.hpp"

namespace lhic::nn {

// Dense row-major tensor. Activations use NCHW order.
template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> data;

  Tensor() = default;

  static Tensor zeros(std::vector<int> s) {
    Tensor t;
    t.shape = std::move(s);
    t.data.assign(t.numel_of(t.shape), T(0));
    return t;
  }

  static Tensor full(std::vector<int> s, T v) {
    Tensor t = zeros(std::move(s));
    std::fill(t.data.begin(), t.data.end(), v);
    return t;
  }

  static Tensor from(std::vector<int> s, std::vector<T> d) {
    Tensor t;
    t.shape = std::move(s);
    t.data = std::move(d);
    if (static_cast<std::int64_t>(t.data.size()) != t.numel())
      throw Error(ErrorKind::Shape, "tensor data size does not match shape");
    return t;
  }

  std::int64_t numel() const { return numel_of(shape); }

  static std::int64_t numel_of(const std::vector<int>& s) {
    std::int64_t n = 1;
    for (int d : s) {
      if (d < 1) throw Error(ErrorKind::Shape, "tensor dims must be >= 1");
      n *= d;
    }
    return n;
  }

  int dim(int i) const { return shape.at(static_cast<size_t>(i)); }

  // NCHW element access
  T& at4(int n, int c, int h, int w) {
    return data[((static_cast<std::int64_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }
  T at4(int n, int c, int h, int w) const {
    return data[((static_cast<std::int64_t>(n) * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool operator==(const Tensor&) const = default;

  std::string shape_str() const {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
    os << ']';
    return os.str();
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> t;
    t.shape = shape;
    t.data.reserve(data.size());
    for (T v : data) t.data.push_back(static_cast<U>(v));
    return t;
  }
};

template <typename T>
void require_shape(const Tensor<T>& t, const std::vector<int>& want,
                   const char* what) {
  if (t.shape != want) {
    Tensor<T> w;
    w.shape = want;
    throw Error(ErrorKind::Shape, std::string(what) + ": got " + t.shape_str() +
                                      ", want " + w.shape_str());
  }
}

}  // namespace lhic::nn
