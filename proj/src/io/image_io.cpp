#include "hug/io/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "hug/core/errors.hpp"

namespace hug::io {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw InputError("cannot open " + path.string());
  return f;
}

std::uint8_t to_byte(float v) {
  float c = std::clamp(v, 0.0f, 1.0f);
  return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

void write_png_rows(const std::filesystem::path& path, int width, int height, int color_type, int bit_depth,
                    const std::vector<std::vector<png_byte>>& rows) {
  FilePtr fp = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw InputError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw InputError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw InputError("libpng write error: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto& row : rows) png_write_row(png, const_cast<png_bytep>(row.data()));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png(const std::filesystem::path& path, const ImageBuffer& image) {
  if (image.width <= 0 || image.height <= 0) throw InputError("write_png: empty image");
  bool rgb = image.channels == 3;
  std::vector<std::vector<png_byte>> rows(image.height);
  for (int y = 0; y < image.height; ++y) {
    auto& row = rows[y];
    row.resize(static_cast<std::size_t>(image.width) * (rgb ? 3 : 1));
    for (int x = 0; x < image.width; ++x) {
      if (rgb) {
        for (int c = 0; c < 3; ++c) row[x * 3 + c] = to_byte(image.at(x, y, c));
      } else if (image.semantic == Semantic::Mask) {
        row[x] = image.at(x, y) != 0.0f ? 255 : 0;
      } else {
        row[x] = to_byte(image.at(x, y));
      }
    }
  }
  write_png_rows(path, image.width, image.height, rgb ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, 8, rows);
}

void write_png16(const std::filesystem::path& path, const std::vector<std::int32_t>& values, int width, int height) {
  if (width <= 0 || height <= 0 || values.size() != static_cast<std::size_t>(width) * height)
    throw InputError("write_png16: bad dimensions");
  std::vector<std::vector<png_byte>> rows(height);
  for (int y = 0; y < height; ++y) {
    auto& row = rows[y];
    row.resize(static_cast<std::size_t>(width) * 2);
    for (int x = 0; x < width; ++x) {
      std::int32_t v = values[static_cast<std::size_t>(y) * width + x];
      if (v < 0 || v > 65535) throw InputError("write_png16: value out of 16-bit range");
      row[x * 2] = static_cast<png_byte>(v >> 8);  // network byte order per PNG spec
      row[x * 2 + 1] = static_cast<png_byte>(v & 0xff);
    }
  }
  write_png_rows(path, width, height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

namespace {

struct DecodedPng {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 or 3
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // row-major, interleaved
};

DecodedPng decode_png(const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "rb");
  png_byte header[8];
  if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
    throw InputError("not a PNG file: " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw InputError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw InputError("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("libpng read error: " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  DecodedPng out;
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.bit_depth = png_get_bit_depth(png, info);
  int ch = png_get_channels(png, info);
  if (ch != 1 && ch != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("read_png: unsupported channel count after expansion");
  }
  out.channels = ch;
  std::size_t row_samples = static_cast<std::size_t>(out.width) * ch;
  out.samples.resize(row_samples * out.height);
  std::vector<png_byte> row(png_get_rowbytes(png, info));
  for (int y = 0; y < out.height; ++y) {
    png_read_row(png, row.data(), nullptr);
    if (out.bit_depth == 16) {
      for (std::size_t i = 0; i < row_samples; ++i)
        out.samples[y * row_samples + i] = static_cast<std::uint16_t>((row[i * 2] << 8) | row[i * 2 + 1]);
    } else {
      for (std::size_t i = 0; i < row_samples; ++i) out.samples[y * row_samples + i] = row[i];
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace

ImageBuffer read_png(const std::filesystem::path& path, Semantic semantic) {
  DecodedPng png = decode_png(path);
  ImageBuffer image(png.width, png.height, semantic);
  float denom = png.bit_depth == 16 ? 65535.0f : 255.0f;
  for (int y = 0; y < png.height; ++y) {
    for (int x = 0; x < png.width; ++x) {
      const std::uint16_t* px = &png.samples[(static_cast<std::size_t>(y) * png.width + x) * png.channels];
      for (int c = 0; c < image.channels; ++c) {
        std::uint16_t raw = png.channels == 3 ? px[std::min(c, png.channels - 1)] : px[0];
        float v;
        if (semantic == Semantic::Instance) {
          v = static_cast<float>(raw);
        } else {
          v = static_cast<float>(raw) / denom;
          if (semantic == Semantic::Mask) v = v >= 0.5f ? 1.0f : 0.0f;
        }
        image.at(x, y, c) = v;
      }
    }
  }
  return image;
}

std::vector<std::int32_t> read_png16(const std::filesystem::path& path, int& width, int& height) {
  DecodedPng png = decode_png(path);
  if (png.channels != 1) throw InputError("read_png16: expected grayscale " + path.string());
  width = png.width;
  height = png.height;
  std::vector<std::int32_t> out(png.samples.size());
  for (std::size_t i = 0; i < png.samples.size(); ++i) out[i] = png.samples[i];
  return out;
}

void write_pfm(const std::filesystem::path& path, const ImageBuffer& image) {
  if (image.channels != 1 && image.channels != 3) throw InputError("write_pfm: 1 or 3 channels only");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string());
  out << (image.channels == 3 ? "PF" : "Pf") << "\n"
      << image.width << " " << image.height << "\n"
      << "-1.0\n";  // negative scale marks little-endian payloads
  for (int y = image.height - 1; y >= 0; --y)  // PFM scanlines run bottom-up
    out.write(reinterpret_cast<const char*>(&image.at(0, y, 0)),
              static_cast<std::streamsize>(sizeof(float)) * image.width * image.channels);
  if (!out) throw InputError("write failed: " + path.string());
}

void write_int32_grid(const std::filesystem::path& path, const std::vector<std::int32_t>& values, int width,
                      int height) {
  if (width <= 0 || height <= 0 || values.size() != static_cast<std::size_t>(width) * height)
    throw InputError("write_int32_grid: bad dimensions");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open " + path.string());
  std::int32_t header[2] = {width, height};
  out.write(reinterpret_cast<const char*>(header), 8);
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * 4));
  if (!out) throw InputError("write failed: " + path.string());
}

std::vector<std::int32_t> read_int32_grid(const std::filesystem::path& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::int32_t header[2];
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in || header[0] <= 0 || header[1] <= 0) throw InputError("malformed int32 grid header: " + path.string());
  width = header[0];
  height = header[1];
  std::vector<std::int32_t> values(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * 4));
  if (!in) throw InputError("truncated int32 grid: " + path.string());
  return values;
}

ImageBuffer read_pfm(const std::filesystem::path& path, Semantic semantic) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::string magic;
  int width = 0, height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  if ((magic != "Pf" && magic != "PF") || width <= 0 || height <= 0 || scale == 0.0)
    throw InputError("malformed PFM header: " + path.string());
  in.get();  // single whitespace byte terminating the header
  int channels = magic == "PF" ? 3 : 1;
  if (channels != ImageBuffer::channels_for(semantic))
    throw InputError("read_pfm: channel count does not match requested semantic");
  if (scale > 0.0) throw InputError("read_pfm: big-endian PFM not supported");
  ImageBuffer image(width, height, semantic);
  for (int y = height - 1; y >= 0; --y) {
    in.read(reinterpret_cast<char*>(&image.at(0, y, 0)),
            static_cast<std::streamsize>(sizeof(float)) * width * channels);
    if (!in) throw InputError("truncated PFM payload: " + path.string());
  }
  return image;
}

}  // namespace hug::io
