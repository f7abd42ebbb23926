#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "lhic/tensor.hpp"

namespace lhic::nn {

// Adam with bias correction. Moment buffers are keyed by parameter name
// so they survive checkpointing.
template <typename T>
class Adam {
 public:
  explicit Adam(double lr = 1e-4, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (lr < 0) throw Error(ErrorKind::Usage, "adam lr must be non-negative");
    if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1)
      throw Error(ErrorKind::Usage, "adam betas must be in [0,1)");
  }

  void step(std::map<std::string, Tensor<T>>& params,
            const std::map<std::string, Tensor<T>>& grads) {
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1_, step_);
    const double bc2 = 1.0 - std::pow(beta2_, step_);
    for (auto& [name, p] : params) {
      auto git = grads.find(name);
      if (git == grads.end()) continue;
      const Tensor<T>& g = git->second;
      if (!g.same_shape(p))
        throw Error(ErrorKind::Shape, "adam: grad shape mismatch for " + name);
      for (T v : g.data)
        if (std::isnan(static_cast<double>(v)))
          throw Error(ErrorKind::Numeric, "adam: NaN gradient for parameter " + name);
      Tensor<T>& m = moment(m1_, name, p);
      Tensor<T>& v = moment(m2_, name, p);
      for (size_t i = 0; i < p.data.size(); ++i) {
        const double gi = static_cast<double>(g.data[i]);
        double mi = beta1_ * m.data[i] + (1.0 - beta1_) * gi;
        double vi = beta2_ * v.data[i] + (1.0 - beta2_) * gi * gi;
        m.data[i] = static_cast<T>(mi);
        v.data[i] = static_cast<T>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        p.data[i] -= static_cast<T>(lr_ * mhat / (std::sqrt(vhat) + eps_));
      }
    }
  }

  double lr() const { return lr_; }
  std::uint64_t step_count() const { return step_; }

  // Exposed for optimizer-state checkpointing.
  std::map<std::string, Tensor<T>>& first_moments() { return m1_; }
  std::map<std::string, Tensor<T>>& second_moments() { return m2_; }
  void set_step_count(std::uint64_t s) { step_ = s; }

 private:
  Tensor<T>& moment(std::map<std::string, Tensor<T>>& store,
                    const std::string& name, const Tensor<T>& p) {
    auto it = store.find(name);
    if (it == store.end())
      it = store.emplace(name, Tensor<T>::zeros(p.shape)).first;
    return it->second;
  }

  double lr_, beta1_, beta2_, eps_;
  std::uint64_t step_ = 0;
  std::map<std::string, Tensor<T>> m1_, m2_;
};

}  // namespace lhic::nn
