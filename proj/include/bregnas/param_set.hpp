#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bregnas/errors.hpp"
#include "bregnas/tensor.hpp"

namespace bregnas {

/// Named, ordered collection of parameter tensors. Mirrors (gradients,
/// subgradients, optimizer moments) share the same names and shapes;
/// iteration order is insertion order, so elementwise sweeps are
/// deterministic.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Tensor tensor;
  };

  void add(std::string name, Tensor tensor) {
    if (has(name)) throw ConsistencyError("duplicate parameter name: " + name);
    entries_.push_back({std::move(name), std::move(tensor)});
  }

  bool has(const std::string& name) const { return find(name) != nullptr; }

  Tensor& at(const std::string& name) {
    if (Entry* e = find(name)) return e->tensor;
    throw ConsistencyError("unknown parameter name: " + name);
  }
  const Tensor& at(const std::string& name) const {
    if (const Entry* e = find(name)) return e->tensor;
    throw ConsistencyError("unknown parameter name: " + name);
  }

  std::size_t size() const { return entries_.size(); }
  Entry& entry(std::size_t i) { return entries_[i]; }
  const Entry& entry(std::size_t i) const { return entries_[i]; }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Mirror with the same names/shapes, all zeros.
  ParamSet zeros_like() const {
    ParamSet out;
    for (const Entry& e : entries_) out.add(e.name, Tensor::zeros(e.tensor.shape()));
    return out;
  }

  bool same_layout(const ParamSet& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].name != other.entries_[i].name) return false;
      if (!entries_[i].tensor.same_shape(other.entries_[i].tensor)) return false;
    }
    return true;
  }

  std::size_t total_numel() const {
    std::size_t n = 0;
    for (const Entry& e : entries_) n += e.tensor.numel();
    return n;
  }

  bool all_finite() const {
    for (const Entry& e : entries_)
      if (!e.tensor.all_finite()) return false;
    return true;
  }

 private:
  Entry* find(const std::string& name) {
    for (Entry& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }
  const Entry* find(const std::string& name) const {
    for (const Entry& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

  std::vector<Entry> entries_;
};

}  // namespace bregnas
