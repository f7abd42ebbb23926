#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lhic/graph.hpp"

namespace lhic::nn {

enum class Activation : std::uint8_t { PReLU = 0, ReLU = 1 };

inline const char* activation_name(Activation a) {
  return a == Activation::PReLU ? "prelu" : "relu";
}

struct ModelConfig {
  int compact_scale = 16;          // side ratio input -> compact: 8, 16 or 32
  std::vector<int> stage_channels; // one entry per stride-2 stage
  double dropout_p = 0.2;
  Activation activation = Activation::PReLU;

  int stages() const { return static_cast<int>(stage_channels.size()); }

  void validate() const {
    int s = compact_scale;
    if (s != 8 && s != 16 && s != 32)
      throw Error(ErrorKind::Usage, "compact_scale must be 8, 16 or 32");
    int log2s = 0;
    while ((1 << log2s) < s) ++log2s;
    if (stages() != log2s)
      throw Error(ErrorKind::Usage,
                  "stage_channels must have log2(compact_scale) entries");
    for (int c : stage_channels)
      if (c < 1) throw Error(ErrorKind::Usage, "stage channels must be >= 1");
    if (dropout_p < 0 || dropout_p >= 1)
      throw Error(ErrorKind::Usage, "dropout_p must be in [0,1)");
  }

  // Channel plan for full-scale runs.
  static ModelConfig defaults(int compact_scale = 16) {
    ModelConfig cfg;
    cfg.compact_scale = compact_scale;
    switch (compact_scale) {
      case 8: cfg.stage_channels = {64, 128, 256}; break;
      case 16: cfg.stage_channels = {64, 128, 256, 512}; break;
      case 32: cfg.stage_channels = {64, 128, 256, 512, 512}; break;
      default: throw Error(ErrorKind::Usage, "compact_scale must be 8, 16 or 32");
    }
    return cfg;
  }

  // Small channel plan for tests and desk-scale experiments.
  static ModelConfig toy(int compact_scale = 8) {
    ModelConfig cfg;
    cfg.compact_scale = compact_scale;
    int log2s = 0;
    while ((1 << log2s) < compact_scale) ++log2s;
    cfg.stage_channels.assign(static_cast<size_t>(log2s), 0);
    const int plan[] = {8, 12, 16, 16, 16};
    for (int i = 0; i < log2s; ++i) cfg.stage_channels[static_cast<size_t>(i)] = plan[i];
    cfg.dropout_p = 0.1;
    return cfg;
  }

  // Weighted layers in one network: stride-2 layer + two residual-block
  // convs per stage, plus the head conv.
  int weighted_layers_per_network() const { return 3 * stages() + 1; }
};

// CompNet + RecNet parameter store and graph builders.
template <typename T>
class Autoencoder {
 public:
  using ValueId = typename Graph<T>::ValueId;
  using ParamIds = std::map<std::string, ValueId>;

  struct ForwardOptions {
    bool training = false;
    std::uint64_t dropout_seed = 0;
  };

  Autoencoder() = default;
  explicit Autoencoder(ModelConfig cfg, std::uint64_t init_seed = 1) : cfg_(std::move(cfg)) {
    cfg_.validate();
    init_params(init_seed);
  }

  const ModelConfig& config() const { return cfg_; }
  std::map<std::string, Tensor<T>>& params() { return params_; }
  const std::map<std::string, Tensor<T>>& params() const { return params_; }

  static Autoencoder from_parts(ModelConfig cfg, std::map<std::string, Tensor<T>> params) {
    Autoencoder m;
    m.cfg_ = std::move(cfg);
    m.cfg_.validate();
    m.params_ = std::move(params);
    return m;
  }

  template <typename U>
  Autoencoder<U> cast() const {
    std::map<std::string, Tensor<U>> p;
    for (const auto& [k, v] : params_) p.emplace(k, v.template cast<U>());
    return Autoencoder<U>::from_parts(cfg_, std::move(p));
  }

  // x: N x 3 x H x W in [-1,1], H and W divisible by compact_scale.
  // Returns the compact code, N x 3 x H/s x W/s in (-1,1).
  ValueId compnet(Graph<T>& g, ValueId x, const ForwardOptions& opt,
                  ParamIds& ids) const {
    const auto& xs = g.value(x).shape;
    if (xs.size() != 4 || xs[1] != 3)
      throw Error(ErrorKind::Shape, "compnet expects N x 3 x H x W input");
    if (xs[2] % cfg_.compact_scale != 0 || xs[3] % cfg_.compact_scale != 0)
      throw Error(ErrorKind::Shape,
                  "compnet input dims must be divisible by compact_scale " +
                      std::to_string(cfg_.compact_scale) + "; pad the image first");
    std::uint64_t seed = opt.dropout_seed;
    ValueId h = x;
    for (int st = 0; st < cfg_.stages(); ++st) {
      const std::string p = "comp.down" + std::to_string(st);
      h = g.conv2d(h, bind(g, ids, p + ".w"), bind(g, ids, p + ".b"), 2);
      h = activation(g, h, ids, p);
      h = residual_block(g, h, ids, "comp.rb" + std::to_string(st), opt, &seed);
    }
    h = g.conv2d(h, bind(g, ids, "comp.head.w"), bind(g, ids, "comp.head.b"), 1);
    return g.tanh_op(h);
  }

  // c: N x 3 x h x w in [-1,1]. Returns N x 3 x h*s x w*s in (-1,1).
  ValueId recnet(Graph<T>& g, ValueId c, const ForwardOptions& opt,
                 ParamIds& ids) const {
    const auto& cs = g.value(c).shape;
    if (cs.size() != 4 || cs[1] != 3)
      throw Error(ErrorKind::Shape, "recnet expects N x 3 x h x w input");
    std::uint64_t seed = opt.dropout_seed + 0x9e3779b97f4a7c15ull;
    ValueId h = c;
    for (int st = 0; st < cfg_.stages(); ++st) {
      const std::string p = "rec.up" + std::to_string(st);
      h = g.deconv2d(h, bind(g, ids, p + ".w"), bind(g, ids, p + ".b"), 2);
      h = activation(g, h, ids, p);
      h = residual_block(g, h, ids, "rec.rb" + std::to_string(st), opt, &seed);
    }
    h = g.conv2d(h, bind(g, ids, "rec.head.w"), bind(g, ids, "rec.head.b"), 1);
    return g.tanh_op(h);
  }

 private:
  ValueId bind(Graph<T>& g, ParamIds& ids, const std::string& name) const {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    auto pit = params_.find(name);
    if (pit == params_.end())
      throw Error(ErrorKind::ModelMismatch, "missing model parameter " + name);
    ValueId id = g.param(pit->second);
    ids.emplace(name, id);
    return id;
  }

  ValueId activation(Graph<T>& g, ValueId h, ParamIds& ids,
                     const std::string& prefix) const {
    if (cfg_.activation == Activation::PReLU)
      return g.prelu(h, bind(g, ids, prefix + ".a"));
    return g.relu(h);
  }

  // conv - act - dropout - conv - skip add; nothing after the addition.
  ValueId residual_block(Graph<T>& g, ValueId x, ParamIds& ids,
                         const std::string& p, const ForwardOptions& opt,
                         std::uint64_t* seed) const {
    ValueId h = g.conv2d(x, bind(g, ids, p + ".c1.w"), bind(g, ids, p + ".c1.b"), 1);
    h = activation(g, h, ids, p + ".c1");
    h = g.dropout(h, cfg_.dropout_p, opt.training, (*seed)++);
    h = g.conv2d(h, bind(g, ids, p + ".c2.w"), bind(g, ids, p + ".c2.b"), 1);
    return g.add(h, x);
  }

  void init_params(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto conv_w = [&](const std::string& name, int co, int ci) {
      add_he(name, {co, ci, 3, 3}, ci * 9, rng);
      params_.emplace(name.substr(0, name.size() - 1) + "b", Tensor<T>::zeros({co}));
    };
    auto deconv_w = [&](const std::string& name, int ci, int co) {
      add_he(name, {ci, co, 3, 3}, ci * 9, rng);
      params_.emplace(name.substr(0, name.size() - 1) + "b", Tensor<T>::zeros({co}));
    };
    auto prelu_a = [&](const std::string& name, int c) {
      if (cfg_.activation == Activation::PReLU)
        params_.emplace(name, Tensor<T>::full({c}, T(0.25)));
    };
    // CompNet
    int in_c = 3;
    for (int st = 0; st < cfg_.stages(); ++st) {
      const int out_c = cfg_.stage_channels[static_cast<size_t>(st)];
      const std::string d = "comp.down" + std::to_string(st);
      conv_w(d + ".w", out_c, in_c);
      prelu_a(d + ".a", out_c);
      add_res_block("comp.rb" + std::to_string(st), out_c, rng, conv_w, prelu_a);
      in_c = out_c;
    }
    conv_w("comp.head.w", 3, in_c);
    // RecNet mirrors CompNet with reversed channel plan.
    in_c = 3;
    for (int st = 0; st < cfg_.stages(); ++st) {
      const int out_c =
          cfg_.stage_channels[static_cast<size_t>(cfg_.stages() - 1 - st)];
      const std::string u = "rec.up" + std::to_string(st);
      deconv_w(u + ".w", in_c, out_c);
      prelu_a(u + ".a", out_c);
      add_res_block("rec.rb" + std::to_string(st), out_c, rng, conv_w, prelu_a);
      in_c = out_c;
    }
    conv_w("rec.head.w", 3, in_c);
  }

  template <typename ConvW, typename PreluA>
  void add_res_block(const std::string& p, int c, std::mt19937_64&,
                     ConvW& conv_w, PreluA& prelu_a) {
    conv_w(p + ".c1.w", c, c);
    prelu_a(p + ".c1.a", c);
    conv_w(p + ".c2.w", c, c);
  }

  void add_he(const std::string& name, std::vector<int> shape, int fan_in,
              std::mt19937_64& rng) {
    Tensor<T> w = Tensor<T>::zeros(std::move(shape));
    std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / fan_in));
    for (T& v : w.data) v = static_cast<T>(dist(rng));
    params_.emplace(name, std::move(w));
  }

  ModelConfig cfg_;
  std::map<std::string, Tensor<T>> params_;
};

}  // namespace lhic::nn
