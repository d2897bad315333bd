#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bregnas/rng.hpp"
#include "bregnas/tensor.hpp"

namespace bregnas {

/// One split of the digit corpus: images as rows of a flat n x 784 tensor
/// scaled to [0, 1], labels retained although the restoration tasks do not
/// use them.
struct Dataset {
  Tensor images;
  std::vector<std::uint8_t> labels;
  std::string split;

  std::size_t count() const { return images.extent(0); }
  std::size_t pixels() const { return images.extent(1); }
};

enum class Task { Denoise, Deblur };

struct CorruptionSpec {
  Task kind = Task::Denoise;
  double noise_std = 0.05;
  std::size_t blur_size = 9;
  double blur_sigma = 5.0;
};

/// Input/target pairs for a restoration task. Targets are bit-identical to
/// the clean source images; inputs are corrupted and not clipped to [0, 1].
struct PairedDataset {
  Tensor inputs;
  Tensor targets;

  std::size_t count() const { return inputs.extent(0); }
};

/// Raw IDX readers. Accept plain and gzip files (magic 2051 for images,
/// 2049 for labels, big-endian). Images come back as n x (rows*cols) bytes
/// scaled to [0, 1].
Tensor read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);

/// IDX writers, used by the synthetic-corpus generator and by tests.
void write_idx_images(const std::string& path, const std::vector<std::uint8_t>& pixels,
                      std::size_t count, std::size_t rows, std::size_t cols);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

/// Loads the 60k training archive from `dir` (train-images-idx3-ubyte and
/// train-labels-idx1-ubyte, optionally .gz) and splits it deterministically:
/// first 55,000 images train, last 5,000 test, in file order. Throws IoError
/// with fetch instructions when the files are absent and FormatError when
/// the archive is not the standard 60k one.
std::pair<Dataset, Dataset> load_mnist(const std::string& dir);

/// First n samples of a split, in order. n = 0 keeps everything.
Dataset subset(const Dataset& ds, std::size_t n);

/// Builds the corrupted/clean pairs for a task. Denoise adds i.i.d.
/// N(0, noise_std^2) per pixel; deblur first convolves each image (reshaped
/// to its square side) with a normalized Gaussian kernel, then adds the same
/// noise. Nothing is clipped.
PairedDataset corrupt(const Dataset& ds, const CorruptionSpec& spec, Rng& rng);

/// Fisher-Yates permutation of {0..n-1} driven by the rng.
std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng);

/// Rows of `t` at the given indices, in order.
Tensor gather_rows(const Tensor& t, const std::vector<std::size_t>& indices);

/// One epoch of shuffled minibatches over a paired dataset; the final
/// partial batch is included. Each instance consumes the rng once (for the
/// shuffle) at construction, so the batch sequence is a deterministic
/// function of the rng state, i.e. of (seed, epoch).
class BatchIterator {
 public:
  BatchIterator(const PairedDataset& ds, std::size_t batch_size, Rng& rng);

  /// Fills the next (input, target) pair; false at the end of the epoch.
  bool next(Tensor& inputs, Tensor& targets);

  std::size_t batch_count() const;
  const std::vector<std::size_t>& order() const { return order_; }

 private:
  const PairedDataset& ds_;
  std::size_t batch_size_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

/// Writes a deterministic synthetic handwritten-digit corpus in IDX format
/// (train-images-idx3-ubyte, train-labels-idx1-ubyte) to `dir`: 28x28
/// stroke-rendered digits with random affine jitter. A stand-in with the
/// same file format and value range as the real archive, for environments
/// where it cannot be downloaded.
void write_synthetic_corpus(const std::string& dir, std::size_t count, std::uint64_t seed);

/// Renders one synthetic digit (28x28, values in [0,1]) for the given class.
Tensor render_digit(int digit, Rng& rng);

}  // namespace bregnas
