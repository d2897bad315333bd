#include "bregnas/data.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "bregnas/errors.hpp"

namespace bregnas {

namespace {

constexpr std::uint32_t kImageMagic = 2051;
constexpr std::uint32_t kLabelMagic = 2049;

class GzReader {
 public:
  explicit GzReader(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw IoError("cannot open " + path);
  }
  ~GzReader() {
    if (file_) gzclose(file_);
  }
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  void read_exact(void* dst, std::size_t n, const std::string& path) {
    const int got = gzread(file_, dst, static_cast<unsigned>(n));
    if (got < 0 || static_cast<std::size_t>(got) != n)
      throw FormatError("truncated IDX file: " + path);
  }

  std::uint32_t read_u32_be(const std::string& path) {
    unsigned char b[4];
    read_exact(b, 4, path);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
  }

 private:
  gzFile file_;
};

void write_u32_be(std::FILE* f, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  if (std::fwrite(b, 1, 4, f) != 4) throw IoError("short write");
}

std::string find_idx_file(const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  // Both the hyphenated and the dotted historical spellings are seen in the
  // wild; gzip variants are accepted as-is.
  for (const std::string& name :
       {stem, stem + ".gz", [&] {
          std::string dotted = stem;
          dotted.replace(dotted.rfind("-idx"), 4, ".idx");
          return dotted;
        }()}) {
    const fs::path candidate = fs::path(dir) / name;
    if (fs::exists(candidate)) return candidate.string();
  }
  return {};
}

}  // namespace

Tensor read_idx_images(const std::string& path) {
  GzReader in(path);
  const std::uint32_t magic = in.read_u32_be(path);
  if (magic != kImageMagic)
    throw FormatError("bad IDX image magic in " + path + " (expected 2051)");
  const std::uint32_t count = in.read_u32_be(path);
  const std::uint32_t rows = in.read_u32_be(path);
  const std::uint32_t cols = in.read_u32_be(path);
  if (count == 0 || rows == 0 || cols == 0) throw FormatError("empty IDX image file: " + path);
  const std::size_t pixels = std::size_t(rows) * cols;
  std::vector<unsigned char> raw(std::size_t(count) * pixels);
  in.read_exact(raw.data(), raw.size(), path);
  Tensor images({count, pixels});
  for (std::size_t i = 0; i < raw.size(); ++i) images[i] = raw[i] / 255.0;
  return images;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
  GzReader in(path);
  const std::uint32_t magic = in.read_u32_be(path);
  if (magic != kLabelMagic)
    throw FormatError("bad IDX label magic in " + path + " (expected 2049)");
  const std::uint32_t count = in.read_u32_be(path);
  std::vector<std::uint8_t> labels(count);
  in.read_exact(labels.data(), labels.size(), path);
  return labels;
}

void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels,
                      std::size_t count, std::size_t rows, std::size_t cols) {
  if (pixels.size() != count * rows * cols)
    throw DimensionError("pixel buffer does not match count*rows*cols");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_u32_be(f, kImageMagic);
  write_u32_be(f, static_cast<std::uint32_t>(count));
  write_u32_be(f, static_cast<std::uint32_t>(rows));
  write_u32_be(f, static_cast<std::uint32_t>(cols));
  if (std::fwrite(pixels.data(), 1, pixels.size(), f) != pixels.size()) {
    std::fclose(f);
    throw IoError("short write to " + path);
  }
  std::fclose(f);
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_u32_be(f, kLabelMagic);
  write_u32_be(f, static_cast<std::uint32_t>(labels.size()));
  if (std::fwrite(labels.data(), 1, labels.size(), f) != labels.size()) {
    std::fclose(f);
    throw IoError("short write to " + path);
  }
  std::fclose(f);
}

std::pair<Dataset, Dataset> load_mnist(const std::string& dir) {
  const std::string images_path = find_idx_file(dir, "train-images-idx3-ubyte");
  const std::string labels_path = find_idx_file(dir, "train-labels-idx1-ubyte");
  if (images_path.empty() || labels_path.empty())
    throw IoError(
        "training archive not found in '" + dir +
        "'.\nExpected train-images-idx3-ubyte and train-labels-idx1-ubyte (optionally .gz).\n"
        "Download the MNIST archive, e.g.\n"
        "  https://ossci-datasets.s3.amazonaws.com/mnist/train-images-idx3-ubyte.gz\n"
        "  https://ossci-datasets.s3.amazonaws.com/mnist/train-labels-idx1-ubyte.gz\n"
        "or generate a synthetic stand-in with: bregnas synth --out " +
        dir);

  Tensor images = read_idx_images(images_path);
  std::vector<std::uint8_t> labels = read_idx_labels(labels_path);
  constexpr std::size_t kTotal = 60000, kTrain = 55000;
  if (images.extent(0) != kTotal || labels.size() != kTotal)
    throw FormatError("expected the standard 60000-image training archive, got " +
                      std::to_string(images.extent(0)) + " images");
  const std::size_t pixels = images.extent(1);

  Dataset train{Tensor({kTrain, pixels}), {}, "train"};
  Dataset test{Tensor({kTotal - kTrain, pixels}), {}, "test"};
  for (std::size_t i = 0; i < kTrain * pixels; ++i) train.images[i] = images[i];
  for (std::size_t i = 0; i < (kTotal - kTrain) * pixels; ++i)
    test.images[i] = images[kTrain * pixels + i];
  train.labels.assign(labels.begin(), labels.begin() + kTrain);
  test.labels.assign(labels.begin() + kTrain, labels.end());
  return {std::move(train), std::move(test)};
}

Dataset subset(const Dataset& ds, std::size_t n) {
  if (n == 0 || n >= ds.count()) return ds;
  Dataset out{Tensor({n, ds.pixels()}), {}, ds.split};
  for (std::size_t i = 0; i < n * ds.pixels(); ++i) out.images[i] = ds.images[i];
  out.labels.assign(ds.labels.begin(), ds.labels.begin() + n);
  return out;
}

PairedDataset corrupt(const Dataset& ds, const CorruptionSpec& spec, Rng& rng) {
  if (!(spec.noise_std >= 0.0)) throw ParameterError("noise_std must be >= 0");
  const std::size_t n = ds.count(), p = ds.pixels();
  PairedDataset out{Tensor({n, p}), ds.images};

  if (spec.kind == Task::Deblur) {
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(double(p))));
    if (side * side != p)
      throw ParameterError("deblur needs square images; got " + std::to_string(p) + " pixels");
    const Tensor kernel = gaussian_kernel2d(spec.blur_size, spec.blur_sigma);
    for (std::size_t i = 0; i < n; ++i) {
      Tensor image({side, side});
      for (std::size_t q = 0; q < p; ++q) image[q] = ds.images[i * p + q];
      const Tensor blurred = conv2d_same(image, kernel);
      for (std::size_t q = 0; q < p; ++q) out.inputs[i * p + q] = blurred[q];
    }
  } else {
    out.inputs = ds.images;
  }

  if (spec.noise_std > 0.0)
    for (std::size_t q = 0; q < n * p; ++q)
      out.inputs[q] += rng.normal(0.0, spec.noise_std);
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t j = rng.below(i + 1);
    std::swap(idx[i], idx[j]);
  }
  return idx;
}

Tensor gather_rows(const Tensor& t, const std::vector<std::size_t>& indices) {
  const std::size_t p = t.extent(1);
  Tensor out({indices.size(), p});
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t q = 0; q < p; ++q) out(i, q) = t(indices[i], q);
  return out;
}

BatchIterator::BatchIterator(const PairedDataset& ds, std::size_t batch_size, Rng& rng)
    : ds_(ds), batch_size_(batch_size) {
  if (batch_size == 0) throw ParameterError("batch_size must be >= 1");
  order_ = shuffled_indices(ds.count(), rng);
}

std::size_t BatchIterator::batch_count() const {
  return (order_.size() + batch_size_ - 1) / batch_size_;
}

bool BatchIterator::next(Tensor& inputs, Tensor& targets) {
  if (cursor_ >= order_.size()) return false;
  const std::size_t end = std::min(cursor_ + batch_size_, order_.size());
  std::vector<std::size_t> batch(order_.begin() + cursor_, order_.begin() + end);
  cursor_ = end;
  inputs = gather_rows(ds_.inputs, batch);
  targets = gather_rows(ds_.targets, batch);
  return true;
}

}  // namespace bregnas
