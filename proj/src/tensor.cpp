#include "bregnas/tensor.hpp"

#include <cmath>

namespace bregnas {

std::size_t Tensor::checked_numel(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw DimensionError("tensor extents must be positive");
    n *= e;
  }
  return n;
}

bool Tensor::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.ndim() != 2 || b.ndim() != 2)
    throw DimensionError("matmul expects 2-D tensors");
  if (a.extent(1) != b.extent(0))
    throw DimensionError("matmul inner extents disagree");
  const std::size_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
  Tensor c({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += a(i, p) * b(p, j);
      c(i, j) = acc;
    }
  }
  return c;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (std::size_t i = 0; i < out.numel(); ++i)
    if (out[i] < 0.0) out[i] = 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& upstream) {
  if (!x.same_shape(upstream))
    throw DimensionError("relu_backward shapes disagree");
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.numel(); ++i)
    out[i] = x[i] > 0.0 ? upstream[i] : 0.0;
  return out;
}

Tensor gaussian_kernel2d(std::size_t size, double sigma) {
  if (size % 2 == 0) throw ParameterError("gaussian_kernel2d size must be odd");
  if (!(sigma > 0.0)) throw ParameterError("gaussian_kernel2d sigma must be positive");
  const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(size) / 2;
  Tensor k({size, size});
  double sum = 0.0;
  for (std::ptrdiff_t i = -c; i <= c; ++i) {
    for (std::ptrdiff_t j = -c; j <= c; ++j) {
      const double w = std::exp(-(static_cast<double>(i * i + j * j)) / (2.0 * sigma * sigma));
      k(static_cast<std::size_t>(i + c), static_cast<std::size_t>(j + c)) = w;
      sum += w;
    }
  }
  for (std::size_t i = 0; i < k.numel(); ++i) k[i] /= sum;
  return k;
}

Tensor conv2d_same(const Tensor& image, const Tensor& kernel) {
  if (image.ndim() != 2 || kernel.ndim() != 2)
    throw DimensionError("conv2d_same expects 2-D tensors");
  if (kernel.extent(0) != kernel.extent(1))
    throw DimensionError("conv2d_same kernel must be square");
  const std::size_t h = image.extent(0), w = image.extent(1), k = kernel.extent(0);
  if (k % 2 == 0) throw ParameterError("conv2d_same kernel size must be odd");
  if (k > h || k > w)
    throw DimensionError("conv2d_same kernel larger than image");
  const std::ptrdiff_t c = static_cast<std::ptrdiff_t>(k) / 2;
  Tensor out({h, w});
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t dy = -c; dy <= c; ++dy) {
        const std::ptrdiff_t sy = static_cast<std::ptrdiff_t>(y) + dy;
        if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) continue;
        for (std::ptrdiff_t dx = -c; dx <= c; ++dx) {
          const std::ptrdiff_t sx = static_cast<std::ptrdiff_t>(x) + dx;
          if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(w)) continue;
          acc += image(static_cast<std::size_t>(sy), static_cast<std::size_t>(sx)) *
                 kernel(static_cast<std::size_t>(dy + c), static_cast<std::size_t>(dx + c));
        }
      }
      out(y, x) = acc;
    }
  }
  return out;
}

}  // namespace bregnas
