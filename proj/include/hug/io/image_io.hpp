#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hug/core/image.hpp"

namespace hug::io {

/// 8-bit PNG. Rgb buffers write three channels ([0,1] clamped to 0..255),
/// masks write grayscale 0/255, everything else grayscale clamped to [0,1].
void write_png(const std::filesystem::path& path, const ImageBuffer& image);

/// Reads an 8-bit or 16-bit PNG; gray and palette images come back as the
/// requested semantic (values scaled to [0,1]), rgb(a) images keep rgb.
/// Mask semantics threshold at 0.5; Instance semantics keep raw integer
/// values (16-bit PNGs carry ids up to 65535).
ImageBuffer read_png(const std::filesystem::path& path, Semantic semantic);

/// 16-bit grayscale PNG of raw integer values (instance / part id maps).
void write_png16(const std::filesystem::path& path, const std::vector<std::int32_t>& values, int width, int height);
std::vector<std::int32_t> read_png16(const std::filesystem::path& path, int& width, int& height);

/// Portable FloatMap, little-endian (negative scale), bottom-up scanlines as
/// the format requires. One channel ("Pf") or three ("PF").
void write_pfm(const std::filesystem::path& path, const ImageBuffer& image);
ImageBuffer read_pfm(const std::filesystem::path& path, Semantic semantic);

/// Raw little-endian int32 grid with an 8-byte (width, height) header;
/// carries face index maps.
void write_int32_grid(const std::filesystem::path& path, const std::vector<std::int32_t>& values, int width,
                      int height);
std::vector<std::int32_t> read_int32_grid(const std::filesystem::path& path, int& width, int& height);

}  // namespace hug::io
