#pragma once

#include <string>

#include "nbv/render.hpp"

namespace nbv {

// 8-bit PNG writers (zlib-backed). Values are clamped to [0,1] and rounded.
void write_png_rgb(const Image& img, const std::string& path);
void write_png_silhouette(const Image& img, const std::string& path);

}  // namespace nbv
