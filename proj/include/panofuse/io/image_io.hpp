#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "panofuse/geom/raster.hpp"

namespace panofuse::io {

// PNG: RGB 8-bit for images, single-channel {0,255} for masks.
std::vector<std::uint8_t> encode_png(const geom::EqrImage& image);
std::vector<std::uint8_t> encode_png(const geom::BitMask& mask);
geom::EqrImage decode_png_rgb(const std::vector<std::uint8_t>& bytes);
geom::BitMask decode_png_mask(const std::vector<std::uint8_t>& bytes);

void write_png(const std::filesystem::path& path, const geom::EqrImage& image);
void write_png(const std::filesystem::path& path, const geom::BitMask& mask);

// PFM: grayscale float32, little-endian, bottom-up rows per convention.
// Undefined depth round-trips as NaN.
std::vector<std::uint8_t> encode_pfm(const geom::DepthMap& depth);
geom::DepthMap decode_pfm(const std::vector<std::uint8_t>& bytes);
void write_pfm(const std::filesystem::path& path, const geom::DepthMap& depth);
geom::DepthMap read_pfm(const std::filesystem::path& path);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace panofuse::io
