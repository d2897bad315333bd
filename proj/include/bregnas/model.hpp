#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bregnas/param_set.hpp"
#include "bregnas/regularizer.hpp"
#include "bregnas/tensor.hpp"

namespace bregnas {

enum class FinalActivation { Relu, Linear };

/// Intermediate state retained by forward() for the backward pass:
/// activations x^(0..L), pre-activations z^(0..L-1), and the per-layer
/// active-row lists used to skip zero rows.
struct ForwardTrace {
  std::vector<Tensor> x;
  std::vector<Tensor> z;
  std::vector<std::vector<std::size_t>> active_rows;
  std::uint64_t revision = 0;
};

/// Search-space network: L square weight layers of width d, biases, and a
/// lower-triangular family of scalar skip weights tau(l, i) feeding
/// activation i into layer l+1:
///
///   x^(l+1) = act(W^(l) x^(l) + b^(l)) + sum_{i<=l} tau^(l,i) x^(i)
///
/// The activation is ReLU on every layer; the last layer can be switched to
/// linear. Parameters live in a ParamSet ("W0".."W{L-1}", "b0".."b{L-1}",
/// "tau" packed row-wise lower-triangular) so optimizers can mutate them
/// uniformly.
class DenseResidualNet {
 public:
  DenseResidualNet(std::size_t layers, std::size_t width,
                   FinalActivation final_act = FinalActivation::Relu);

  std::size_t layers() const { return layers_; }
  std::size_t width() const { return width_; }
  FinalActivation final_activation() const { return final_act_; }

  const ParamSet& params() const { return params_; }
  /// Mutable access invalidates existing traces.
  ParamSet& params() {
    ++revision_;
    return params_;
  }

  const Tensor& weight(std::size_t l) const { return params_.at("W" + std::to_string(l)); }
  const Tensor& bias(std::size_t l) const { return params_.at("b" + std::to_string(l)); }
  double tau(std::size_t l, std::size_t i) const { return params_.at("tau")[tau_index(l, i)]; }

  /// Batch forward pass; x0 has shape batch x d. Returns x^(L) and the trace.
  std::pair<Tensor, ForwardTrace> forward(const Tensor& x0) const;

  /// Exact gradients of a scalar loss with upstream = dLoss/dx^(L).
  /// Returns (parameter gradients mirroring params(), gradient w.r.t. x0).
  /// The trace must come from forward() on the current parameters.
  std::pair<ParamSet, Tensor> backward(const ForwardTrace& trace, const Tensor& upstream) const;

 private:
  std::size_t layers_, width_;
  FinalActivation final_act_;
  ParamSet params_;
  std::uint64_t revision_ = 0;
};

/// Mean over all entries of (pred - target)^2 plus its gradient w.r.t. pred.
std::pair<double, Tensor> mse_loss(const Tensor& pred, const Tensor& target);

/// Per layer, the number of weight rows with nonzero L2 norm (exact zero
/// test; shrinkage produces exact zeros). Reports that prepend the input
/// width as layer 0 do so at the reporting layer, not here.
std::vector<std::size_t> active_widths(const DenseResidualNet& net);

/// Entrywise mean of the skip scalars across nets, as a lower-triangular
/// L x L matrix (entry (l, i) = mean tau^(l,i); upper triangle zero).
Tensor connectivity_matrix(const std::vector<DenseResidualNet>& nets);

}  // namespace bregnas
