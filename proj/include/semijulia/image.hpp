#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/poly.hpp"
#include "semijulia/single_dynamics.hpp"

// Raster output: binary PPM (P6), bit-exact for a given cloud and window.

namespace semijulia {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Window {
  double re0 = -2.0, im0 = -2.0, re1 = 2.0, im1 = 2.0;
};

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

  Image(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("Image: empty raster");
    rgb.assign(static_cast<std::size_t>(w) * h * 3, 0);
  }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::size_t at = (static_cast<std::size_t>(y) * width + x) * 3;
    rgb[at] = r;
    rgb[at + 1] = g;
    rgb[at + 2] = b;
  }
};

inline void write_ppm(const Image& img, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open image file: " + path);
  const std::string header = "P6\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  bool ok = std::fwrite(header.data(), 1, header.size(), f) == header.size();
  ok = ok && std::fwrite(img.rgb.data(), 1, img.rgb.size(), f) == img.rgb.size();
  if (std::fclose(f) != 0) ok = false;
  if (!ok) throw IoError("short write on image file: " + path);
}

// Bounding box of the finite cloud points, padded 10%; falls back to
// [-2,2]^2 for empty or all-infinite clouds.
inline Window auto_window(const SetApprox& cloud) {
  double re_lo = HUGE_VAL, re_hi = -HUGE_VAL, im_lo = HUGE_VAL, im_hi = -HUGE_VAL;
  bool any = false;
  for (const auto& p : cloud.points) {
    if (p.is_infinity()) continue;
    any = true;
    re_lo = std::min(re_lo, p.re());
    re_hi = std::max(re_hi, p.re());
    im_lo = std::min(im_lo, p.im());
    im_hi = std::max(im_hi, p.im());
  }
  if (!any) return Window{};
  const double pad_re = std::max(1e-6, 0.1 * (re_hi - re_lo));
  const double pad_im = std::max(1e-6, 0.1 * (im_hi - im_lo));
  return {re_lo - pad_re, im_lo - pad_im, re_hi + pad_re, im_hi + pad_im};
}

// White cloud points over black background; points at infinity and points
// outside the window are skipped.
inline Image render_cloud(const SetApprox& cloud, const Window& win, int width,
                          int height) {
  if (!(win.re1 > win.re0) || !(win.im1 > win.im0)) {
    throw std::invalid_argument("render_cloud: degenerate window");
  }
  Image img(width, height);
  const double sx = width / (win.re1 - win.re0);
  const double sy = height / (win.im1 - win.im0);
  for (const auto& p : cloud.points) {
    if (p.is_infinity()) continue;
    const int x = static_cast<int>((p.re() - win.re0) * sx);
    const int y = static_cast<int>((win.im1 - p.im()) * sy);
    if (x < 0 || x >= width || y < 0 || y >= height) continue;
    img.set(x, y, 255, 255, 255);
  }
  return img;
}

// Escape-time shading for one map: exterior pixels shaded by how fast they
// pass the escape radius, interior left black.
inline Image render_escape(const Polynomial& p, const Window& win, int width,
                           int height, int max_iter = 96) {
  if (p.degree() < 2) throw std::invalid_argument("render_escape: degree < 2");
  Image img(width, height);
  const double radius = escape_radius(p);
  const double r2 = radius * radius;
  for (int y = 0; y < height; ++y) {
    const double im = win.im1 - (y + 0.5) * (win.im1 - win.im0) / height;
    for (int x = 0; x < width; ++x) {
      const double re = win.re0 + (x + 0.5) * (win.re1 - win.re0) / width;
      Complex z(re, im);
      int it = 0;
      while (it < max_iter && std::norm(z) <= r2) {
        z = eval(p, z);
        ++it;
      }
      if (it >= max_iter) continue;  // bounded so far: leave black
      const double shade = 255.0 * (1.0 - static_cast<double>(it) / max_iter);
      const auto v = static_cast<std::uint8_t>(std::clamp(shade, 32.0, 255.0));
      img.set(x, y, v, v, v);
    }
  }
  return img;
}

}  // namespace semijulia
