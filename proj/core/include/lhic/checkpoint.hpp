#pragma once

#include <string>
#include <vector>

#include "lhic/adam.hpp"
#include "lhic/model.hpp"

namespace lhic {

// Model checkpoint: magic "LHICMDL1", then the config as fixed-order
// scalar fields, then each parameter as (name_len u16, name, rank u8,
// dims u32..., f32 little-endian values). Save -> load -> save is
// byte-identical.
std::vector<std::uint8_t> serialize_model(const nn::Autoencoder<float>& model);
nn::Autoencoder<float> deserialize_model(const std::vector<std::uint8_t>& bytes);

void save_model(const std::string& path, const nn::Autoencoder<float>& model);
nn::Autoencoder<float> load_model(const std::string& path);

// Hash of the serialized checkpoint, stored in containers.
std::array<std::uint8_t, 8> model_hash(const nn::Autoencoder<float>& model);

// Optimizer sidecar ("LHICOPT1"): Adam step count plus moment buffers,
// enabling bit-exact training resume.
void save_optimizer(const std::string& path, nn::Adam<float>& opt);
void load_optimizer(const std::string& path, nn::Adam<float>& opt);

}  // namespace lhic
