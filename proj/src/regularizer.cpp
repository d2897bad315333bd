#include "bregnas/regularizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bregnas {

namespace {

bool penalized(PenaltyKind k) {
  return k == PenaltyKind::L1 || k == PenaltyKind::GroupL2 || k == PenaltyKind::L1Pos;
}

double group_l2_norm(const Tensor& t, const Group& g) {
  double sq = 0.0;
  for (std::size_t i : g.idx) sq += t[i] * t[i];
  return std::sqrt(sq);
}

}  // namespace

Regularizer::Regularizer(std::vector<GroupSpec> specs, double delta)
    : specs_(std::move(specs)), delta_(delta) {
  if (!(delta > 0.0)) throw ParameterError("regularizer delta must be positive");
  for (const GroupSpec& spec : specs_)
    for (const Group& g : spec.groups)
      if (penalized(g.kind) && !(g.mu > 0.0))
        throw ParameterError("penalty weight mu must be positive");
}

double Regularizer::eval(const ParamSet& params) const {
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (const GroupSpec& spec : specs_) {
    const Tensor& t = params.at(spec.tensor);
    for (const Group& g : spec.groups) {
      switch (g.kind) {
        case PenaltyKind::None:
          break;
        case PenaltyKind::L1:
          for (std::size_t i : g.idx) total += g.mu * std::abs(t[i]);
          break;
        case PenaltyKind::GroupL2:
          total += g.mu * std::sqrt(static_cast<double>(g.idx.size())) * group_l2_norm(t, g);
          break;
        case PenaltyKind::ZeroConstraint:
          for (std::size_t i : g.idx)
            if (t[i] != 0.0) return inf;
          break;
        case PenaltyKind::L1Pos:
          for (std::size_t i : g.idx) {
            if (t[i] < 0.0) return inf;
            total += g.mu * t[i];
          }
          break;
      }
    }
  }
  return total;
}

void Regularizer::prox_into(const ParamSet& v, ParamSet& theta) const {
  if (!v.same_layout(theta)) throw ConsistencyError("prox output does not mirror input");
  // Default (unpenalized) entries: theta = delta * v.
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Tensor& src = v.entry(e).tensor;
    Tensor& dst = theta.entry(e).tensor;
    for (std::size_t i = 0; i < src.numel(); ++i) dst[i] = delta_ * src[i];
  }
  for (const GroupSpec& spec : specs_) {
    const Tensor& vt = v.at(spec.tensor);
    Tensor& tt = theta.at(spec.tensor);
    for (const Group& g : spec.groups) {
      switch (g.kind) {
        case PenaltyKind::None:
          break;
        case PenaltyKind::L1:
          for (std::size_t i : g.idx) {
            const double mag = std::abs(vt[i]) - g.mu;
            tt[i] = mag > 0.0 ? delta_ * (vt[i] < 0.0 ? -mag : mag) : 0.0;
          }
          break;
        case PenaltyKind::GroupL2: {
          const double norm = group_l2_norm(vt, g);
          const double threshold = g.mu * std::sqrt(static_cast<double>(g.idx.size()));
          if (norm > threshold) {
            const double scale = delta_ * (1.0 - threshold / norm);
            for (std::size_t i : g.idx) tt[i] = scale * vt[i];
          } else {
            for (std::size_t i : g.idx) tt[i] = 0.0;
          }
          break;
        }
        case PenaltyKind::ZeroConstraint:
          for (std::size_t i : g.idx) tt[i] = 0.0;
          break;
        case PenaltyKind::L1Pos:
          for (std::size_t i : g.idx) {
            const double shifted = vt[i] - g.mu;
            tt[i] = shifted > 0.0 ? delta_ * shifted : 0.0;
          }
          break;
      }
    }
  }
}

ParamSet Regularizer::prox(const ParamSet& v) const {
  ParamSet theta = v.zeros_like();
  prox_into(v, theta);
  return theta;
}

ParamSet Regularizer::init_subgradient(const ParamSet& params) const {
  ParamSet v = params.zeros_like();
  // Default (unpenalized): v = theta / delta.
  for (std::size_t e = 0; e < params.size(); ++e) {
    const Tensor& src = params.entry(e).tensor;
    Tensor& dst = v.entry(e).tensor;
    for (std::size_t i = 0; i < src.numel(); ++i) dst[i] = src[i] / delta_;
  }
  for (const GroupSpec& spec : specs_) {
    const Tensor& tt = params.at(spec.tensor);
    Tensor& vt = v.at(spec.tensor);
    for (const Group& g : spec.groups) {
      switch (g.kind) {
        case PenaltyKind::None:
          break;
        case PenaltyKind::L1:
          for (std::size_t i : g.idx) {
            if (tt[i] == 0.0)
              vt[i] = 0.0;
            else
              vt[i] = (tt[i] > 0.0 ? g.mu : -g.mu) + tt[i] / delta_;
          }
          break;
        case PenaltyKind::GroupL2: {
          const double norm = group_l2_norm(tt, g);
          if (norm == 0.0) {
            for (std::size_t i : g.idx) vt[i] = 0.0;
          } else {
            const double weight = g.mu * std::sqrt(static_cast<double>(g.idx.size())) / norm;
            for (std::size_t i : g.idx) vt[i] = weight * tt[i] + tt[i] / delta_;
          }
          break;
        }
        case PenaltyKind::ZeroConstraint:
          for (std::size_t i : g.idx) {
            if (tt[i] != 0.0)
              throw ConsistencyError("zero-constrained parameter is nonzero in " + spec.tensor);
            vt[i] = 0.0;
          }
          break;
        case PenaltyKind::L1Pos:
          for (std::size_t i : g.idx) {
            if (tt[i] < 0.0)
              throw ConsistencyError("nonnegativity-constrained parameter is negative in " +
                                     spec.tensor);
            vt[i] = tt[i] == 0.0 ? 0.0 : g.mu + tt[i] / delta_;
          }
          break;
      }
    }
  }
  return v;
}

double Regularizer::subgradient_violation(const ParamSet& v, const ParamSet& theta) const {
  if (!v.same_layout(theta)) throw ConsistencyError("mirror layouts disagree");
  double worst = 0.0;
  const auto bump = [&worst](double x) { worst = std::max(worst, x); };

  // Start from the unpenalized condition v = theta/delta everywhere, then
  // overwrite covered entries with their groupwise conditions.
  std::vector<std::vector<bool>> covered(v.size());
  for (std::size_t e = 0; e < v.size(); ++e)
    covered[e].assign(v.entry(e).tensor.numel(), false);
  for (const GroupSpec& spec : specs_) {
    std::size_t e = 0;
    while (e < v.size() && v.entry(e).name != spec.tensor) ++e;
    if (e == v.size()) throw ConsistencyError("unknown tensor in spec: " + spec.tensor);
    const Tensor& vt = v.entry(e).tensor;
    const Tensor& tt = theta.entry(e).tensor;
    for (const Group& g : spec.groups) {
      for (std::size_t i : g.idx) covered[e][i] = true;
      switch (g.kind) {
        case PenaltyKind::None:
          for (std::size_t i : g.idx) bump(std::abs(vt[i] - tt[i] / delta_));
          break;
        case PenaltyKind::L1:
          for (std::size_t i : g.idx) {
            if (tt[i] != 0.0)
              bump(std::abs(vt[i] - ((tt[i] > 0.0 ? g.mu : -g.mu) + tt[i] / delta_)));
            else
              bump(std::max(std::abs(vt[i]) - g.mu, 0.0));
          }
          break;
        case PenaltyKind::GroupL2: {
          const double tnorm = group_l2_norm(tt, g);
          const double weight = g.mu * std::sqrt(static_cast<double>(g.idx.size()));
          if (tnorm != 0.0) {
            for (std::size_t i : g.idx)
              bump(std::abs(vt[i] - (weight * tt[i] / tnorm + tt[i] / delta_)));
          } else {
            bump(std::max(group_l2_norm(vt, g) - weight, 0.0));
          }
          break;
        }
        case PenaltyKind::ZeroConstraint:
          // v is unconstrained; theta must sit at zero.
          for (std::size_t i : g.idx) bump(std::abs(tt[i]));
          break;
        case PenaltyKind::L1Pos:
          for (std::size_t i : g.idx) {
            if (tt[i] > 0.0)
              bump(std::abs(vt[i] - (g.mu + tt[i] / delta_)));
            else if (tt[i] == 0.0)
              bump(std::max(vt[i] - g.mu, 0.0));
            else
              bump(-tt[i]);
          }
          break;
      }
    }
  }
  for (std::size_t e = 0; e < v.size(); ++e) {
    const Tensor& vt = v.entry(e).tensor;
    const Tensor& tt = theta.entry(e).tensor;
    for (std::size_t i = 0; i < vt.numel(); ++i)
      if (!covered[e][i]) bump(std::abs(vt[i] - tt[i] / delta_));
  }
  return worst;
}

void Regularizer::validate(const ParamSet& params) const {
  for (const GroupSpec& spec : specs_) {
    const Tensor& t = params.at(spec.tensor);
    std::vector<bool> seen(t.numel(), false);
    for (const Group& g : spec.groups) {
      if (penalized(g.kind) && !(g.mu > 0.0))
        throw ParameterError("penalty weight mu must be positive");
      for (std::size_t i : g.idx) {
        if (i >= t.numel())
          throw ConsistencyError("group index out of bounds in " + spec.tensor);
        if (seen[i]) throw ConsistencyError("overlapping groups in " + spec.tensor);
        seen[i] = true;
      }
    }
  }
}

namespace {

GroupSpec row_groups(const std::string& name, std::size_t width, double mu) {
  GroupSpec spec{name, {}};
  spec.groups.reserve(width);
  for (std::size_t r = 0; r < width; ++r) {
    Group g;
    g.kind = PenaltyKind::GroupL2;
    g.mu = mu;
    g.idx.resize(width);
    for (std::size_t c = 0; c < width; ++c) g.idx[c] = r * width + c;
    spec.groups.push_back(std::move(g));
  }
  return spec;
}

GroupSpec skip_groups(std::size_t layers, PenaltyKind kind, double mu) {
  GroupSpec spec{"tau", {}};
  spec.groups.reserve(tau_count(layers));
  for (std::size_t i = 0; i < tau_count(layers); ++i)
    spec.groups.push_back(Group{kind, kind == PenaltyKind::ZeroConstraint ? 0.0 : mu, {i}});
  return spec;
}

Regularizer build(std::size_t layers, std::size_t width, double mu, double delta,
                  PenaltyKind skip_kind) {
  if (!(mu > 0.0)) throw ParameterError("mu must be positive");
  std::vector<GroupSpec> specs;
  specs.reserve(layers + 1);
  for (std::size_t l = 0; l < layers; ++l)
    specs.push_back(row_groups("W" + std::to_string(l), width, mu));
  specs.push_back(skip_groups(layers, skip_kind, mu));
  return Regularizer(std::move(specs), delta);
}

}  // namespace

Regularizer build_regularizer_rows(std::size_t layers, std::size_t width, double mu,
                                   double delta) {
  return build(layers, width, mu, delta, PenaltyKind::ZeroConstraint);
}

Regularizer build_regularizer_skip_rows(std::size_t layers, std::size_t width, double mu,
                                        double delta, bool positive_skips) {
  return build(layers, width, mu, delta,
               positive_skips ? PenaltyKind::L1Pos : PenaltyKind::L1);
}

}  // namespace bregnas
