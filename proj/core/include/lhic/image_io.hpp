#pragma once

#include <string>
#include <vector>

#include "lhic/image.hpp"

namespace lhic {

// PNG support covers 8-bit gray / RGB / RGBA (gray replicated, alpha
// dropped on read; always written as 8-bit RGB), non-interlaced only.
ImageU8 read_png(const std::string& path);
void write_png(const std::string& path, const ImageU8& img);
std::vector<std::uint8_t> encode_png(const ImageU8& img);
ImageU8 decode_png(const std::vector<std::uint8_t>& bytes);

// Binary PPM (P6, maxval 255).
ImageU8 read_ppm(const std::string& path);
void write_ppm(const std::string& path, const ImageU8& img);

// Dispatch on extension (.png / .ppm).
ImageU8 read_image(const std::string& path);
void write_image(const std::string& path, const ImageU8& img);

// Raw file helpers shared across modules.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace lhic
