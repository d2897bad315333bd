#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bregnas/model.hpp"
#include "bregnas/optim.hpp"

namespace bregnas {

/// Network checkpoint, optionally with the optimizer state that was training
/// it. Flat little-endian binary container:
///
///   magic "BRNC" | u32 version (1) | u64 layers | u64 width |
///   u64 seed | u64 epoch | u8 final_activation | u8 has_optimizer |
///   [u64 optimizer step count] | u64 tensor count |
///   per tensor: u32 name length | name bytes | u32 ndim | u64 extents... |
///               f64 values (raw IEEE-754 bit patterns, little-endian)
///
/// Net parameters are stored under their ParamSet names; optimizer mirrors
/// under "opt.v.", "opt.m1.", "opt.m2." prefixes.
struct Checkpoint {
  DenseResidualNet net;
  std::uint64_t seed = 0;
  std::uint64_t epoch = 0;
  std::optional<std::uint64_t> optimizer_steps;
  std::optional<ParamSet> v, m1, m2;
};

void save_checkpoint(const std::string& path, const DenseResidualNet& net, std::uint64_t seed,
                     std::uint64_t epoch, const AdaBreg* optimizer = nullptr);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace bregnas
