#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "bottlegan/error.hpp"

namespace bottlegan {

// Transmitted-light image, channels in [0, 1], white = 1.
struct ImageRGB {
  int h = 0, w = 0;
  std::vector<double> v;  // h*w*3, row-major, interleaved channels

  ImageRGB() = default;
  ImageRGB(int height, int width)
      : h(height), w(width), v(static_cast<std::size_t>(height) * width * 3, 0.0) {}
  double& at(int y, int x, int c) { return v[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  double at(int y, int x, int c) const { return v[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  std::size_t pixels() const { return static_cast<std::size_t>(h) * w; }
};

// Optical-density image, all values >= 0.
struct ImageOD {
  int h = 0, w = 0;
  std::vector<double> v;

  ImageOD() = default;
  ImageOD(int height, int width)
      : h(height), w(width), v(static_cast<std::size_t>(height) * width * 3, 0.0) {}
  double& at(int y, int x, int c) { return v[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  double at(int y, int x, int c) const { return v[(static_cast<std::size_t>(y) * w + x) * 3 + c]; }
  std::size_t pixels() const { return static_cast<std::size_t>(h) * w; }
};

// 8-bit interleaved RGB; the canonical stored form (PNG payload).
struct ImageRGB8 {
  int h = 0, w = 0;
  std::vector<std::uint8_t> v;

  ImageRGB8() = default;
  ImageRGB8(int height, int width)
      : h(height), w(width), v(static_cast<std::size_t>(height) * width * 3, 0) {}
};

inline ImageRGB8 quantize(const ImageRGB& img) {
  ImageRGB8 out(img.h, img.w);
  for (std::size_t i = 0; i < img.v.size(); ++i) {
    double x = img.v[i];
    x = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    out.v[i] = static_cast<std::uint8_t>(std::lround(x * 255.0));
  }
  return out;
}

inline ImageRGB dequantize(const ImageRGB8& img) {
  ImageRGB out(img.h, img.w);
  for (std::size_t i = 0; i < img.v.size(); ++i) out.v[i] = img.v[i] / 255.0;
  return out;
}

}  // namespace bottlegan
