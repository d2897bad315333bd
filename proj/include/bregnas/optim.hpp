#pragma once

#include <cstdint>

#include "bregnas/param_set.hpp"
#include "bregnas/regularizer.hpp"

namespace bregnas {

struct HyperParams {
  double eta = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double delta = 1.0;
};

/// Inverse-scale-space optimizer with Adam-style moment estimation. Two
/// coupled variables: the subgradient mirror v, updated by bias-corrected
/// moment steps, and the parameters theta, recovered from v through the
/// proximal map of the regularizer each step:
///
///   m1 <- b1 m1 + (1-b1) g          m2 <- b2 m2 + (1-b2) g^2
///   v  <- v - eta * (m1/(1-b1^k)) / (sqrt(m2/(1-b2^k)) + eps)
///   theta <- prox_{delta J}(delta v)
///
/// With an empty regularizer and delta = 1 this is exactly Adam. Penalized
/// coordinates stay at zero until their v entries cross the shrinkage
/// threshold, so parameters activate coarse-to-fine over the run.
class AdaBreg {
 public:
  /// Initializes k = 0, zero moments, and v as a subgradient of the
  /// elastic-net functional at params (zero on zero entries/groups).
  /// Throws ConsistencyError if params violate the regularizer's
  /// constraints or hyper.delta disagrees with reg.delta().
  AdaBreg(const Regularizer& reg, const ParamSet& params, HyperParams hyper = {});

  /// One update of (v, params) from the gradient at the current params.
  /// A non-finite gradient raises StepError and leaves all state unchanged.
  void step(const Regularizer& reg, const ParamSet& grad, ParamSet& params);

  std::uint64_t steps() const { return k_; }
  const ParamSet& v() const { return v_; }
  const ParamSet& m1() const { return m1_; }
  const ParamSet& m2() const { return m2_; }
  const HyperParams& hyper() const { return hyper_; }

  /// When enabled, every step verifies that (v, theta) satisfy the groupwise
  /// subgradient conditions; meant for tests, costs one extra sweep.
  void set_invariant_checks(bool on) { check_invariants_ = on; }

  /// Restore state from a checkpoint. Layouts must mirror the ones the
  /// optimizer was constructed with.
  void restore(std::uint64_t k, ParamSet v, ParamSet m1, ParamSet m2);

 private:
  std::uint64_t k_ = 0;
  ParamSet v_, m1_, m2_;
  HyperParams hyper_;
  bool check_invariants_ = false;
};

/// Plain linearized variant without moments: v <- v - eta * g,
/// theta <- prox_{delta J}(delta v). Baseline for the same mechanism.
class LinBreg {
 public:
  LinBreg(const Regularizer& reg, const ParamSet& params, double eta);

  void step(const Regularizer& reg, const ParamSet& grad, ParamSet& params);

  const ParamSet& v() const { return v_; }
  double eta() const { return eta_; }

 private:
  ParamSet v_;
  double eta_;
};

}  // namespace bregnas
