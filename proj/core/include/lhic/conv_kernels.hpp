#pragma once

#include "lhic/tensor.hpp"

// Direct 3x3 convolution kernels, padding 1, stride 1 or 2.
// Weight layout is always [outer][inner][3][3]; conv_gather reads the
// outer index as output channel, scatter_adjoint reads it as input
// channel. The stride-2 transposed convolution is the exact adjoint of
// the stride-2 convolution on even-sized inputs, so upsampling doubles
// H and W exactly.

namespace lhic::nn::detail {

inline void check_stride(int stride) {
  if (stride != 1 && stride != 2)
    throw Error(ErrorKind::Shape, "conv stride must be 1 or 2");
}

// y[n,o,ho,wo] = sum_{i,kh,kw} x[n,i,ho*s+kh-1,wo*s+kw-1] * w[o,i,kh,kw]
template <typename T>
Tensor<T> conv_gather(const Tensor<T>& x, const Tensor<T>& w, int stride) {
  check_stride(stride);
  if (x.shape.size() != 4 || w.shape.size() != 4)
    throw Error(ErrorKind::Shape, "conv expects 4-d tensors");
  if (w.shape[2] != 3 || w.shape[3] != 3)
    throw Error(ErrorKind::Shape, "conv kernel must be 3x3, got " + w.shape_str());
  const int N = x.shape[0], Ci = x.shape[1], H = x.shape[2], W = x.shape[3];
  if (w.shape[1] != Ci)
    throw Error(ErrorKind::Shape, "conv channel mismatch: input " + x.shape_str() +
                                      " vs weight " + w.shape_str());
  if (H % stride != 0 || W % stride != 0)
    throw Error(ErrorKind::Shape, "conv input dims " + x.shape_str() +
                                      " not divisible by stride");
  const int Co = w.shape[0];
  const int Ho = H / stride, Wo = W / stride;
  Tensor<T> y = Tensor<T>::zeros({N, Co, Ho, Wo});
  for (int n = 0; n < N; ++n)
    for (int co = 0; co < Co; ++co)
      for (int ci = 0; ci < Ci; ++ci)
        for (int ho = 0; ho < Ho; ++ho)
          for (int wo = 0; wo < Wo; ++wo) {
            T acc = 0;
            for (int kh = 0; kh < 3; ++kh) {
              const int h = ho * stride + kh - 1;
              if (h < 0 || h >= H) continue;
              for (int kw = 0; kw < 3; ++kw) {
                const int ww = wo * stride + kw - 1;
                if (ww < 0 || ww >= W) continue;
                acc += x.at4(n, ci, h, ww) * w.at4(co, ci, kh, kw);
              }
            }
            y.at4(n, co, ho, wo) += acc;
          }
  return y;
}

// Exact adjoint of conv_gather with the same weight array:
// out[n,i,h,w] = sum_{o,kh,kw : h=ho*s+kh-1, w=wo*s+kw-1} x[n,o,ho,wo]*w[o,i,kh,kw]
// Output spatial dims are stride times the input's.
template <typename T>
Tensor<T> scatter_adjoint(const Tensor<T>& x, const Tensor<T>& w, int stride) {
  check_stride(stride);
  if (x.shape.size() != 4 || w.shape.size() != 4)
    throw Error(ErrorKind::Shape, "deconv expects 4-d tensors");
  if (w.shape[2] != 3 || w.shape[3] != 3)
    throw Error(ErrorKind::Shape, "deconv kernel must be 3x3, got " + w.shape_str());
  const int N = x.shape[0], Ca = x.shape[1], Hi = x.shape[2], Wi = x.shape[3];
  if (w.shape[0] != Ca)
    throw Error(ErrorKind::Shape, "deconv channel mismatch: input " + x.shape_str() +
                                      " vs weight " + w.shape_str());
  const int Cb = w.shape[1];
  const int Ho = Hi * stride, Wo = Wi * stride;
  Tensor<T> y = Tensor<T>::zeros({N, Cb, Ho, Wo});
  for (int n = 0; n < N; ++n)
    for (int ca = 0; ca < Ca; ++ca)
      for (int cb = 0; cb < Cb; ++cb)
        for (int hi = 0; hi < Hi; ++hi)
          for (int wi = 0; wi < Wi; ++wi) {
            const T v = x.at4(n, ca, hi, wi);
            for (int kh = 0; kh < 3; ++kh) {
              const int h = hi * stride + kh - 1;
              if (h < 0 || h >= Ho) continue;
              for (int kw = 0; kw < 3; ++kw) {
                const int ww = wi * stride + kw - 1;
                if (ww < 0 || ww >= Wo) continue;
                y.at4(n, cb, h, ww) += v * w.at4(ca, cb, kh, kw);
              }
            }
          }
  return y;
}

// dw[o,i,kh,kw] for conv_gather: x is the forward input, g the output grad.
template <typename T>
Tensor<T> conv_weight_grad(const Tensor<T>& x, const Tensor<T>& g, int stride) {
  const int N = x.shape[0], Ci = x.shape[1], H = x.shape[2], W = x.shape[3];
  const int Co = g.shape[1], Ho = g.shape[2], Wo = g.shape[3];
  Tensor<T> dw = Tensor<T>::zeros({Co, Ci, 3, 3});
  for (int n = 0; n < N; ++n)
    for (int co = 0; co < Co; ++co)
      for (int ci = 0; ci < Ci; ++ci)
        for (int ho = 0; ho < Ho; ++ho)
          for (int wo = 0; wo < Wo; ++wo) {
            const T gv = g.at4(n, co, ho, wo);
            for (int kh = 0; kh < 3; ++kh) {
              const int h = ho * stride + kh - 1;
              if (h < 0 || h >= H) continue;
              for (int kw = 0; kw < 3; ++kw) {
                const int ww = wo * stride + kw - 1;
                if (ww < 0 || ww >= W) continue;
                dw.at4(co, ci, kh, kw) += x.at4(n, ci, h, ww) * gv;
              }
            }
          }
  return dw;
}

// dv[i,o,kh,kw] for scatter_adjoint: x is the forward input, g the output grad.
template <typename T>
Tensor<T> deconv_weight_grad(const Tensor<T>& x, const Tensor<T>& g, int stride) {
  const int N = x.shape[0], Ca = x.shape[1], Hi = x.shape[2], Wi = x.shape[3];
  const int Cb = g.shape[1], Ho = g.shape[2], Wo = g.shape[3];
  Tensor<T> dv = Tensor<T>::zeros({Ca, Cb, 3, 3});
  for (int n = 0; n < N; ++n)
    for (int ca = 0; ca < Ca; ++ca)
      for (int cb = 0; cb < Cb; ++cb)
        for (int hi = 0; hi < Hi; ++hi)
          for (int wi = 0; wi < Wi; ++wi) {
            const T xv = x.at4(n, ca, hi, wi);
            for (int kh = 0; kh < 3; ++kh) {
              const int h = hi * stride + kh - 1;
              if (h < 0 || h >= Ho) continue;
              for (int kw = 0; kw < 3; ++kw) {
                const int ww = wi * stride + kw - 1;
                if (ww < 0 || ww >= Wo) continue;
                dv.at4(ca, cb, kh, kw) += xv * g.at4(n, cb, h, ww);
              }
            }
          }
  return dv;
}

// Per-channel reduction of an NCHW gradient, used for bias grads.
template <typename T>
Tensor<T> channel_sum(const Tensor<T>& g) {
  const int N = g.shape[0], C = g.shape[1], H = g.shape[2], W = g.shape[3];
  Tensor<T> out = Tensor<T>::zeros({C});
  for (int n = 0; n < N; ++n)
    for (int c = 0; c < C; ++c)
      for (int h = 0; h < H; ++h)
        for (int w = 0; w < W; ++w) out.data[c] += g.at4(n, c, h, w);
  return out;
}

}  // namespace lhic::nn::detail
