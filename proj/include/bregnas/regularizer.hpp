#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bregnas/param_set.hpp"

namespace bregnas {

enum class PenaltyKind {
  None,            // unpenalized
  L1,              // mu * |x|
  GroupL2,         // mu * sqrt(n_g) * ||x_g||_2
  ZeroConstraint,  // characteristic function of {0}
  L1Pos,           // mu * |x| plus nonnegativity indicator
};

/// One penalty group: a set of flat indices into a named tensor plus the
/// penalty applied to them jointly. For GroupL2 the group weight is
/// mu * sqrt(idx.size()).
struct Group {
  PenaltyKind kind = PenaltyKind::None;
  double mu = 0.0;
  std::vector<std::size_t> idx;
};

/// Partition of one tensor into penalty groups. Indices not covered by any
/// group are implicitly unpenalized.
struct GroupSpec {
  std::string tensor;
  std::vector<Group> groups;
};

/// A sparsity-enforcing functional J given by disjoint penalty groups across
/// parameter tensors, together with the scale delta of the quadratic part of
/// the elastic-net functional J + ||.||^2 / (2 delta).
class Regularizer {
 public:
  Regularizer() = default;
  Regularizer(std::vector<GroupSpec> specs, double delta);

  double delta() const { return delta_; }
  const std::vector<GroupSpec>& specs() const { return specs_; }

  /// J(params); +inf when a constraint is violated.
  double eval(const ParamSet& params) const;

  /// theta = prox_{delta J}(delta v), groupwise in closed form:
  ///   None:            theta = delta * v
  ///   L1(mu):          theta = delta * sign(v) * max(|v| - mu, 0)
  ///   GroupL2(mu,n):   theta_g = delta * v_g * max(1 - mu*sqrt(n)/||v_g||, 0)
  ///   ZeroConstraint:  theta = 0
  ///   L1Pos(mu):       theta = delta * max(v - mu, 0)
  ParamSet prox(const ParamSet& v) const;

  /// In-place variant for the training loop; theta must mirror v.
  void prox_into(const ParamSet& v, ParamSet& theta) const;

  /// A subgradient v of the elastic-net functional at params, chosen zero on
  /// zero entries/groups. Throws ConsistencyError if params violate a
  /// constraint (nonzero under ZeroConstraint, negative under L1Pos).
  ParamSet init_subgradient(const ParamSet& params) const;

  /// Largest violation of the groupwise subgradient conditions linking
  /// (v, theta); 0 means v is an exact subgradient of the elastic net at
  /// theta. Used by optimizer debug checks and tests.
  double subgradient_violation(const ParamSet& v, const ParamSet& theta) const;

  /// Full structural check: named tensors exist, indices in bounds, groups
  /// pairwise disjoint per tensor, mu positive where required.
  void validate(const ParamSet& params) const;

 private:
  std::vector<GroupSpec> specs_;
  double delta_ = 1.0;
};

/// Row sparsity with no skip connections: every weight-matrix row is a
/// GroupL2(mu, d) group, every skip scalar is constrained to zero, biases are
/// unpenalized. Parameter names follow the dense-residual-net layout
/// ("W0".."W{L-1}", "b0".."b{L-1}", "tau").
Regularizer build_regularizer_rows(std::size_t layers, std::size_t width, double mu,
                                   double delta);

/// Joint sparsity of rows and skip connections: rows as above, every skip
/// scalar an L1(mu) group (L1Pos when positive_skips is set).
Regularizer build_regularizer_skip_rows(std::size_t layers, std::size_t width, double mu,
                                        double delta, bool positive_skips = false);

/// Flat offset of the skip scalar (l, i), i <= l, in the packed "tau" tensor.
inline std::size_t tau_index(std::size_t l, std::size_t i) { return l * (l + 1) / 2 + i; }

/// Number of skip scalars for a net with `layers` weight layers.
inline std::size_t tau_count(std::size_t layers) { return layers * (layers + 1) / 2; }

}  // namespace bregnas
