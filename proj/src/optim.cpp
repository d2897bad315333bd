#include "bregnas/optim.hpp"

#include <cmath>

#include "bregnas/errors.hpp"

namespace bregnas {

namespace {

void require_delta_match(const Regularizer& reg, double delta) {
  if (reg.delta() != delta)
    throw ConsistencyError("optimizer delta disagrees with the regularizer");
}

}  // namespace

AdaBreg::AdaBreg(const Regularizer& reg, const ParamSet& params, HyperParams hyper)
    : hyper_(hyper) {
  require_delta_match(reg, hyper_.delta);
  reg.validate(params);
  v_ = reg.init_subgradient(params);
  m1_ = params.zeros_like();
  m2_ = params.zeros_like();
}

void AdaBreg::step(const Regularizer& reg, const ParamSet& grad, ParamSet& params) {
  require_delta_match(reg, hyper_.delta);
  if (!grad.same_layout(v_) || !params.same_layout(v_))
    throw ConsistencyError("gradient/parameter layout does not mirror the optimizer state");
  if (!grad.all_finite()) throw StepError("non-finite gradient; step aborted");

  const std::uint64_t k = k_ + 1;
  const double c1 = 1.0 - std::pow(hyper_.beta1, static_cast<double>(k));
  const double c2 = 1.0 - std::pow(hyper_.beta2, static_cast<double>(k));

  for (std::size_t e = 0; e < v_.size(); ++e) {
    const Tensor& g = grad.entry(e).tensor;
    Tensor& m1 = m1_.entry(e).tensor;
    Tensor& m2 = m2_.entry(e).tensor;
    Tensor& v = v_.entry(e).tensor;
    for (std::size_t i = 0; i < g.numel(); ++i) {
      m1[i] = hyper_.beta1 * m1[i] + (1.0 - hyper_.beta1) * g[i];
      m2[i] = hyper_.beta2 * m2[i] + (1.0 - hyper_.beta2) * g[i] * g[i];
      const double m1_hat = m1[i] / c1;
      const double m2_hat = m2[i] / c2;
      v[i] -= hyper_.eta * m1_hat / (std::sqrt(m2_hat) + hyper_.eps);
    }
  }
  k_ = k;
  reg.prox_into(v_, params);

  if (check_invariants_) {
    const double violation = reg.subgradient_violation(v_, params);
    if (violation > 1e-9)
      throw ConsistencyError("subgradient invariant violated after step");
  }
}

void AdaBreg::restore(std::uint64_t k, ParamSet v, ParamSet m1, ParamSet m2) {
  if (!v.same_layout(v_) || !m1.same_layout(m1_) || !m2.same_layout(m2_))
    throw ConsistencyError("checkpoint layout does not mirror the optimizer state");
  k_ = k;
  v_ = std::move(v);
  m1_ = std::move(m1);
  m2_ = std::move(m2);
}

LinBreg::LinBreg(const Regularizer& reg, const ParamSet& params, double eta) : eta_(eta) {
  reg.validate(params);
  v_ = reg.init_subgradient(params);
}

void LinBreg::step(const Regularizer& reg, const ParamSet& grad, ParamSet& params) {
  if (!grad.same_layout(v_) || !params.same_layout(v_))
    throw ConsistencyError("gradient/parameter layout does not mirror the optimizer state");
  if (!grad.all_finite()) throw StepError("non-finite gradient; step aborted");
  for (std::size_t e = 0; e < v_.size(); ++e) {
    const Tensor& g = grad.entry(e).tensor;
    Tensor& v = v_.entry(e).tensor;
    for (std::size_t i = 0; i < g.numel(); ++i) v[i] -= eta_ * g[i];
  }
  reg.prox_into(v_, params);
}

}  // namespace bregnas
