#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <vector>

#include "bregnas/data.hpp"
#include "bregnas/errors.hpp"

namespace bregnas {

namespace {

constexpr std::size_t kSide = 28;

struct Seg {
  double x0, y0, x1, y1;
};

void add_line(std::vector<Seg>& segs, double x0, double y0, double x1, double y1) {
  segs.push_back({x0, y0, x1, y1});
}

// Elliptic arc sampled as a polyline; angles in degrees, y grows downward.
void add_arc(std::vector<Seg>& segs, double cx, double cy, double rx, double ry, double a0,
             double a1, int n) {
  double px = 0.0, py = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double a = (a0 + (a1 - a0) * i / n) * std::numbers::pi / 180.0;
    const double x = cx + rx * std::cos(a);
    const double y = cy + ry * std::sin(a);
    if (i > 0) segs.push_back({px, py, x, y});
    px = x;
    py = y;
  }
}

// Stroke skeletons in a unit box, loosely shaped like handwritten digits.
std::vector<Seg> digit_strokes(int digit) {
  std::vector<Seg> s;
  switch (digit) {
    case 0:
      add_arc(s, 0.5, 0.5, 0.3, 0.42, 0, 360, 16);
      break;
    case 1:
      add_line(s, 0.36, 0.24, 0.55, 0.08);
      add_line(s, 0.55, 0.08, 0.55, 0.92);
      break;
    case 2:
      add_arc(s, 0.5, 0.3, 0.28, 0.2, 210, 390, 8);
      add_line(s, 0.742, 0.4, 0.22, 0.9);
      add_line(s, 0.22, 0.9, 0.78, 0.9);
      break;
    case 3:
      add_arc(s, 0.45, 0.3, 0.25, 0.2, 230, 450, 10);
      add_arc(s, 0.45, 0.68, 0.27, 0.22, 270, 490, 10);
      break;
    case 4:
      add_line(s, 0.58, 0.08, 0.22, 0.58);
      add_line(s, 0.22, 0.58, 0.8, 0.58);
      add_line(s, 0.6, 0.3, 0.6, 0.92);
      break;
    case 5:
      add_line(s, 0.72, 0.1, 0.3, 0.1);
      add_line(s, 0.3, 0.1, 0.28, 0.45);
      add_arc(s, 0.47, 0.65, 0.26, 0.24, 230, 480, 10);
      break;
    case 6:
      add_line(s, 0.66, 0.1, 0.42, 0.46);
      add_arc(s, 0.47, 0.66, 0.24, 0.24, 0, 360, 12);
      break;
    case 7:
      add_line(s, 0.22, 0.12, 0.78, 0.12);
      add_line(s, 0.78, 0.12, 0.4, 0.9);
      break;
    case 8:
      add_arc(s, 0.5, 0.3, 0.22, 0.19, 0, 360, 12);
      add_arc(s, 0.5, 0.69, 0.26, 0.22, 0, 360, 12);
      break;
    case 9:
      add_arc(s, 0.52, 0.32, 0.23, 0.22, 0, 360, 12);
      add_line(s, 0.75, 0.36, 0.58, 0.9);
      break;
    default:
      throw ParameterError("digit must lie in 0..9");
  }
  return s;
}

double seg_distance(double px, double py, const Seg& s) {
  const double dx = s.x1 - s.x0, dy = s.y1 - s.y0;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((px - s.x0) * dx + (py - s.y0) * dy) / len2, 0.0, 1.0);
  const double qx = s.x0 + t * dx, qy = s.y0 + t * dy;
  return std::hypot(px - qx, py - qy);
}

}  // namespace

Tensor render_digit(int digit, Rng& rng) {
  std::vector<Seg> strokes = digit_strokes(digit);

  // Random affine jitter around the box center, then map into the 20x20
  // core of the 28x28 field, MNIST-style.
  const double rot = rng.normal(0.0, 0.07);
  const double sx = 0.95 + 0.14 * (rng.uniform01() - 0.5);
  const double sy = 0.95 + 0.14 * (rng.uniform01() - 0.5);
  const double shear = 0.2 * (rng.uniform01() - 0.5);
  const double tx = 1.6 * (rng.uniform01() - 0.5);
  const double ty = 1.6 * (rng.uniform01() - 0.5);
  const double thickness = 1.0 + 0.5 * rng.uniform01();
  const double peak = 0.8 + 0.2 * rng.uniform01();

  const double cr = std::cos(rot), sr = std::sin(rot);
  const auto to_pixels = [&](double& x, double& y) {
    double ux = (x - 0.5) * sx, uy = (y - 0.5) * sy;
    ux += shear * uy;
    const double rxp = cr * ux - sr * uy;
    const double ryp = sr * ux + cr * uy;
    x = 14.0 + 20.0 * rxp + tx;
    y = 14.0 + 20.0 * ryp + ty;
  };
  for (Seg& s : strokes) {
    to_pixels(s.x0, s.y0);
    to_pixels(s.x1, s.y1);
  }

  Tensor image({kSide, kSide});
  const double aa = 0.9;
  for (const Seg& s : strokes) {
    const double reach = thickness + aa;
    const auto lo_x = static_cast<std::ptrdiff_t>(std::floor(std::min(s.x0, s.x1) - reach));
    const auto hi_x = static_cast<std::ptrdiff_t>(std::ceil(std::max(s.x0, s.x1) + reach));
    const auto lo_y = static_cast<std::ptrdiff_t>(std::floor(std::min(s.y0, s.y1) - reach));
    const auto hi_y = static_cast<std::ptrdiff_t>(std::ceil(std::max(s.y0, s.y1) + reach));
    for (std::ptrdiff_t y = std::max<std::ptrdiff_t>(lo_y, 0);
         y <= std::min<std::ptrdiff_t>(hi_y, kSide - 1); ++y) {
      for (std::ptrdiff_t x = std::max<std::ptrdiff_t>(lo_x, 0);
           x <= std::min<std::ptrdiff_t>(hi_x, kSide - 1); ++x) {
        const double d = seg_distance(x + 0.5, y + 0.5, s);
        const double value = peak * std::clamp((thickness - d) / aa, 0.0, 1.0);
        double& px = image(static_cast<std::size_t>(y), static_cast<std::size_t>(x));
        px = std::max(px, value);
      }
    }
  }
  return image;
}

void write_synthetic_corpus(const std::string& dir, std::size_t count, std::uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  Rng rng(seed);
  std::vector<std::uint8_t> pixels(count * kSide * kSide);
  std::vector<std::uint8_t> labels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int digit = static_cast<int>(rng.below(10));
    labels[i] = static_cast<std::uint8_t>(digit);
    const Tensor image = render_digit(digit, rng);
    for (std::size_t q = 0; q < kSide * kSide; ++q)
      pixels[i * kSide * kSide + q] = static_cast<std::uint8_t>(std::lround(255.0 * image[q]));
  }
  write_idx_images((fs::path(dir) / "train-images-idx3-ubyte").string(), pixels, count, kSide,
                   kSide);
  write_idx_labels((fs::path(dir) / "train-labels-idx1-ubyte").string(), labels);
}

}  // namespace bregnas
