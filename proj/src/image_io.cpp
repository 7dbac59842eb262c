#include "nbv/image_io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "nbv/errors.hpp"

namespace nbv {

namespace {

void put_u32_be(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& payload) {
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.append(type, 4);
  out += payload;
  const uLong crc = crc32(0, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                          static_cast<uInt>(out.size() - crc_start));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

std::uint8_t to_byte(float v) {
  const float c = std::fmin(std::fmax(v, 0.0f), 1.0f);
  return static_cast<std::uint8_t>(std::lround(c * 255.0f));
}

void write_png(const std::string& path, int w, int h, int channels,
               const std::vector<std::uint8_t>& pixels) {
  // Filter byte 0 at the start of every row.
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(h) * (1 + static_cast<std::size_t>(w) * channels));
  for (int y = 0; y < h; ++y) {
    raw.push_back(0);
    const std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * w * channels;
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(w) * channels);
  }

  uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> comp(comp_size);
  if (compress2(comp.data(), &comp_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw IoError("png compression failed for '" + path + "'");

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(w));
  put_u32_be(ihdr, static_cast<std::uint32_t>(h));
  ihdr.push_back(8);                                   // bit depth
  ihdr.push_back(channels == 3 ? char(2) : char(0));   // colour type: rgb / gray
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT",
            std::string(reinterpret_cast<const char*>(comp.data()), comp_size));
  put_chunk(out, "IEND", "");

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write png '" + path + "'");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write to png '" + path + "'");
}

}  // namespace

void write_png_rgb(const Image& img, const std::string& path) {
  std::vector<std::uint8_t> px(img.rgb.size());
  for (std::size_t i = 0; i < img.rgb.size(); ++i) px[i] = to_byte(img.rgb[i]);
  write_png(path, img.res, img.res, 3, px);
}

void write_png_silhouette(const Image& img, const std::string& path) {
  std::vector<std::uint8_t> px(img.sil.size());
  for (std::size_t i = 0; i < img.sil.size(); ++i) px[i] = to_byte(img.sil[i]);
  write_png(path, img.res, img.res, 1, px);
}

}  // namespace nbv
