#include "bregnas/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <memory>

#include "bregnas/errors.hpp"

namespace bregnas {

namespace {

constexpr char kMagic[4] = {'B', 'R', 'N', 'C'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

void put_bytes(std::FILE* f, const void* p, std::size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw IoError("checkpoint write failed");
}

void put_u32(std::FILE* f, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(f, b, 4);
}

void put_u64(std::FILE* f, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(f, b, 8);
}

void get_bytes(std::FILE* f, void* p, std::size_t n, const std::string& path) {
  if (std::fread(p, 1, n, f) != n) throw FormatError("truncated checkpoint: " + path);
}

std::uint32_t get_u32(std::FILE* f, const std::string& path) {
  unsigned char b[4];
  get_bytes(f, b, 4, path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::FILE* f, const std::string& path) {
  unsigned char b[8];
  get_bytes(f, b, 8, path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

void put_tensor(std::FILE* f, const std::string& name, const Tensor& t) {
  put_u32(f, static_cast<std::uint32_t>(name.size()));
  put_bytes(f, name.data(), name.size());
  put_u32(f, static_cast<std::uint32_t>(t.ndim()));
  for (std::size_t e : t.shape()) put_u64(f, e);
  for (std::size_t i = 0; i < t.numel(); ++i) put_u64(f, std::bit_cast<std::uint64_t>(t[i]));
}

std::pair<std::string, Tensor> get_tensor(std::FILE* f, const std::string& path) {
  const std::uint32_t name_len = get_u32(f, path);
  if (name_len > 4096) throw FormatError("implausible tensor name length in " + path);
  std::string name(name_len, '\0');
  get_bytes(f, name.data(), name_len, path);
  const std::uint32_t ndim = get_u32(f, path);
  if (ndim > 8) throw FormatError("implausible tensor rank in " + path);
  std::vector<std::size_t> shape(ndim);
  for (auto& e : shape) e = get_u64(f, path);
  Tensor t(shape);
  for (std::size_t i = 0; i < t.numel(); ++i)
    t[i] = std::bit_cast<double>(get_u64(f, path));
  return {std::move(name), std::move(t)};
}

}  // namespace

void save_checkpoint(const std::string& path, const DenseResidualNet& net, std::uint64_t seed,
                     std::uint64_t epoch, const AdaBreg* optimizer) {
  File file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path + " for writing");
  std::FILE* f = file.get();

  put_bytes(f, kMagic, 4);
  put_u32(f, kVersion);
  put_u64(f, net.layers());
  put_u64(f, net.width());
  put_u64(f, seed);
  put_u64(f, epoch);
  const unsigned char act = net.final_activation() == FinalActivation::Linear ? 1 : 0;
  put_bytes(f, &act, 1);
  const unsigned char has_opt = optimizer ? 1 : 0;
  put_bytes(f, &has_opt, 1);
  if (optimizer) put_u64(f, optimizer->steps());

  std::uint64_t n_tensors = net.params().size();
  if (optimizer) n_tensors += 3 * net.params().size();
  put_u64(f, n_tensors);
  for (const auto& e : net.params()) put_tensor(f, e.name, e.tensor);
  if (optimizer) {
    for (const auto& e : optimizer->v()) put_tensor(f, "opt.v." + e.name, e.tensor);
    for (const auto& e : optimizer->m1()) put_tensor(f, "opt.m1." + e.name, e.tensor);
    for (const auto& e : optimizer->m2()) put_tensor(f, "opt.m2." + e.name, e.tensor);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  File file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path);
  std::FILE* f = file.get();

  char magic[4];
  get_bytes(f, magic, 4, path);
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("not a checkpoint file: " + path);
  const std::uint32_t version = get_u32(f, path);
  if (version != kVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  const std::uint64_t layers = get_u64(f, path);
  const std::uint64_t width = get_u64(f, path);
  const std::uint64_t seed = get_u64(f, path);
  const std::uint64_t epoch = get_u64(f, path);
  unsigned char act = 0, has_opt = 0;
  get_bytes(f, &act, 1, path);
  get_bytes(f, &has_opt, 1, path);

  Checkpoint ck{DenseResidualNet(layers, width,
                                 act ? FinalActivation::Linear : FinalActivation::Relu),
                seed, epoch};
  if (has_opt) ck.optimizer_steps = get_u64(f, path);

  ParamSet v, m1, m2;
  const std::uint64_t n_tensors = get_u64(f, path);
  ParamSet& params = ck.net.params();
  for (std::uint64_t i = 0; i < n_tensors; ++i) {
    auto [name, tensor] = get_tensor(f, path);
    if (name.starts_with("opt.v."))
      v.add(name.substr(6), std::move(tensor));
    else if (name.starts_with("opt.m1."))
      m1.add(name.substr(7), std::move(tensor));
    else if (name.starts_with("opt.m2."))
      m2.add(name.substr(7), std::move(tensor));
    else {
      Tensor& dst = params.at(name);
      if (!dst.same_shape(tensor))
        throw FormatError("checkpoint tensor shape mismatch for " + name);
      dst = std::move(tensor);
    }
  }
  if (has_opt) {
    ck.v = std::move(v);
    ck.m1 = std::move(m1);
    ck.m2 = std::move(m2);
  }
  return ck;
}

}  // namespace bregnas
