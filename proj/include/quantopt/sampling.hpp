#ifndef QUANTOPT_SAMPLING_HPP_
#define QUANTOPT_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace quantopt {

// Per-coordinate bounds of a design or uncertainty space.
class Box {
 public:
  Box() = default;
  // Throws Error if the lengths differ or some lower[i] > upper[i].
  Box(std::vector<double> lower, std::vector<double> upper);

  // The cube [lower, upper]^dim.
  static Box cube(std::size_t dim, double lower, double upper);

  std::size_t dim() const { return lower_.size(); }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  double width(std::size_t i) const { return upper_[i] - lower_[i]; }

  // Closed-box membership; false on dimension mismatch.
  bool contains(std::span<const double> x) const;

  bool operator==(const Box&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct Seed {
  std::uint64_t value = 0;
};

// SplitMix64. The generator state is a plain counter, so a stream keyed by
// (seed, ids...) is a pure function of those inputs and independent streams
// can be handed to different threads without coordination.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t state) : state_(state) {}
  // Stream derived from a seed and any number of stream identifiers.
  Rng(Seed seed, std::initializer_list<std::uint64_t> stream_ids);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  bool coin() { return ((*this)() >> 63) != 0; }

 private:
  std::uint64_t state_;
};

// Dense row-major matrix of samples, one point per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Independent uniform draws inside `box`. Row i is generated from stream
// (seed, i), so any subset of rows can be regenerated independently.
Matrix uniform_mc(const Box& box, std::size_t count, Seed seed);

inline constexpr int kMaxSobolDim = 64;

// First `count` points of the Sobol' sequence in gray-code order, skipping
// the origin. Points lie in [0, 1)^dim.
Matrix sobol_sequence(int dim, std::size_t count);

// Affine map of unit-cube points onto `box`.
Matrix scale_to_box(const Matrix& points, const Box& box);

}  // namespace quantopt

#endif  // QUANTOPT_SAMPLING_HPP_
