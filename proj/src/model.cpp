#include "bregnas/model.hpp"

#include <cmath>
#include <string>

namespace bregnas {

namespace {

std::vector<std::size_t> nonzero_rows(const Tensor& w) {
  const std::size_t rows = w.extent(0), cols = w.extent(1);
  std::vector<std::size_t> active;
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = w.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (row[c] != 0.0) {
        active.push_back(r);
        break;
      }
    }
  }
  return active;
}

}  // namespace

DenseResidualNet::DenseResidualNet(std::size_t layers, std::size_t width,
                                   FinalActivation final_act)
    : layers_(layers), width_(width), final_act_(final_act) {
  if (layers == 0 || width == 0) throw ParameterError("net needs positive depth and width");
  for (std::size_t l = 0; l < layers; ++l)
    params_.add("W" + std::to_string(l), Tensor::zeros({width, width}));
  for (std::size_t l = 0; l < layers; ++l)
    params_.add("b" + std::to_string(l), Tensor::zeros({width}));
  params_.add("tau", Tensor::zeros({tau_count(layers)}));
}

std::pair<Tensor, ForwardTrace> DenseResidualNet::forward(const Tensor& x0) const {
  if (x0.ndim() != 2 || x0.extent(1) != width_)
    throw DimensionError("input width does not match the net");
  const std::size_t batch = x0.extent(0), d = width_;
  const Tensor& tau_t = params_.at("tau");

  ForwardTrace trace;
  trace.revision = revision_;
  trace.x.reserve(layers_ + 1);
  trace.z.reserve(layers_);
  trace.active_rows.reserve(layers_);
  trace.x.push_back(x0);

  for (std::size_t l = 0; l < layers_; ++l) {
    const Tensor& w = weight(l);
    const Tensor& b = bias(l);
    const Tensor& xin = trace.x[l];
    trace.active_rows.push_back(nonzero_rows(w));
    const auto& active = trace.active_rows.back();

    // z[n, r] = dot(W[r, :], x[n, :]) + b[r]; zero rows contribute bias only.
    Tensor z({batch, d});
    for (std::size_t n = 0; n < batch; ++n) {
      double* zrow = z.data() + n * d;
      const double* xrow = xin.data() + n * d;
      for (std::size_t r = 0; r < d; ++r) zrow[r] = b[r];
      for (std::size_t r : active) {
        const double* wrow = w.data() + r * d;
        double acc = 0.0;
        for (std::size_t k = 0; k < d; ++k) acc += wrow[k] * xrow[k];
        zrow[r] += acc;
      }
    }

    const bool linear_here = (l + 1 == layers_) && final_act_ == FinalActivation::Linear;
    Tensor xout(z.shape());
    if (linear_here) {
      xout = z;
    } else {
      for (std::size_t i = 0; i < z.numel(); ++i) xout[i] = z[i] > 0.0 ? z[i] : 0.0;
    }
    for (std::size_t i = 0; i <= l; ++i) {
      const double t = tau_t[tau_index(l, i)];
      if (t == 0.0) continue;
      const Tensor& xi = trace.x[i];
      for (std::size_t p = 0; p < xout.numel(); ++p) xout[p] += t * xi[p];
    }
    trace.z.push_back(std::move(z));
    trace.x.push_back(std::move(xout));
  }
  return {trace.x.back(), trace};
}

std::pair<ParamSet, Tensor> DenseResidualNet::backward(const ForwardTrace& trace,
                                                       const Tensor& upstream) const {
  if (trace.revision != revision_ || trace.x.size() != layers_ + 1)
    throw ConsistencyError("trace is stale: parameters changed since forward");
  const std::size_t batch = trace.x[0].extent(0), d = width_;
  if (!upstream.same_shape(trace.x.back()))
    throw DimensionError("upstream shape does not match the output");

  ParamSet grads = params_.zeros_like();
  Tensor& dtau = grads.at("tau");
  const Tensor& tau_t = params_.at("tau");

  std::vector<Tensor> adj;
  adj.reserve(layers_ + 1);
  for (std::size_t l = 0; l < layers_; ++l) adj.push_back(Tensor::zeros({batch, d}));
  adj.push_back(upstream);

  for (std::size_t l = layers_; l-- > 0;) {
    const Tensor& g = adj[l + 1];
    const Tensor& z = trace.z[l];
    const Tensor& xin = trace.x[l];
    const auto& active = trace.active_rows[l];
    const bool linear_here = (l + 1 == layers_) && final_act_ == FinalActivation::Linear;

    // Pre-activation adjoint s = g * act'(z).
    Tensor s({batch, d});
    if (linear_here) {
      s = g;
    } else {
      for (std::size_t i = 0; i < s.numel(); ++i) s[i] = z[i] > 0.0 ? g[i] : 0.0;
    }

    // dW[r, :] += s[n, r] * x^(l)[n, :]; the full matrix is needed because
    // inactive rows still accumulate subgradient mass in the optimizer.
    Tensor& dw = grads.at("W" + std::to_string(l));
    for (std::size_t r = 0; r < d; ++r) {
      double* dwrow = dw.data() + r * d;
      for (std::size_t n = 0; n < batch; ++n) {
        const double sv = s(n, r);
        if (sv == 0.0) continue;
        const double* xrow = xin.data() + n * d;
        for (std::size_t k = 0; k < d; ++k) dwrow[k] += sv * xrow[k];
      }
    }

    Tensor& db = grads.at("b" + std::to_string(l));
    for (std::size_t n = 0; n < batch; ++n)
      for (std::size_t r = 0; r < d; ++r) db[r] += s(n, r);

    // dtau(l, i) = <adjoint of x^(l+1), x^(i)>, summed over batch and width.
    for (std::size_t i = 0; i <= l; ++i) {
      const Tensor& xi = trace.x[i];
      double acc = 0.0;
      for (std::size_t p = 0; p < g.numel(); ++p) acc += g[p] * xi[p];
      dtau[tau_index(l, i)] += acc;
    }

    // Adjoint through the dense path: adj[l] += s W^(l) (active rows only).
    const Tensor& w = weight(l);
    Tensor& al = adj[l];
    for (std::size_t n = 0; n < batch; ++n) {
      double* arow = al.data() + n * d;
      for (std::size_t r : active) {
        const double sv = s(n, r);
        if (sv == 0.0) continue;
        const double* wrow = w.data() + r * d;
        for (std::size_t k = 0; k < d; ++k) arow[k] += sv * wrow[k];
      }
    }

    // Adjoint through the skip paths: adj[i] += tau(l, i) * g.
    for (std::size_t i = 0; i <= l; ++i) {
      const double t = tau_t[tau_index(l, i)];
      if (t == 0.0) continue;
      Tensor& ai = adj[i];
      for (std::size_t p = 0; p < g.numel(); ++p) ai[p] += t * g[p];
    }
  }
  return {std::move(grads), std::move(adj[0])};
}

std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target) {
  if (!pred.same_shape(target)) throw DimensionError("mse_loss shapes disagree");
  const double inv_n = 1.0 / static_cast<double>(pred.numel());
  Tensor grad(pred.shape());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.numel(); ++i) {
    const double diff = pred[i] - target[i];
    loss += diff * diff;
    grad[i] = 2.0 * diff * inv_n;
  }
  return {loss * inv_n, std::move(grad)};
}

std::vector<std::size_t> active_widths(const DenseResidualNet& net) {
  std::vector<std::size_t> widths(net.layers());
  for (std::size_t l = 0; l < net.layers(); ++l)
    widths[l] = nonzero_rows(net.weight(l)).size();
  return widths;
}

Tensor connectivity_matrix(const std::vector<DenseResidualNet>& nets) {
  if (nets.empty()) throw ConsistencyError("connectivity_matrix needs at least one net");
  const std::size_t L = nets[0].layers();
  for (const auto& net : nets)
    if (net.layers() != L || net.width() != nets[0].width())
      throw ConsistencyError("connectivity_matrix nets have mixed dimensions");
  Tensor mean({L, L});
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t i = 0; i <= l; ++i) {
      double acc = 0.0;
      for (const auto& net : nets) acc += net.tau(l, i);
      mean(l, i) = acc / static_cast<double>(nets.size());
    }
  }
  return mean;
}

}  // namespace bregnas
