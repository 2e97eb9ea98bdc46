#include "quantopt/sampling.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "quantopt/error.hpp"
#include "sobol_directions.hpp"

namespace quantopt {

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw Error("box bounds have different lengths (" +
                std::to_string(lower_.size()) + " vs " +
                std::to_string(upper_.size()) + ")");
  }
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw Error("box bound " + std::to_string(i) + " is not finite");
    }
    if (lower_[i] > upper_[i]) {
      throw Error("box lower bound exceeds upper bound in coordinate " +
                  std::to_string(i));
    }
  }
}

Box Box::cube(std::size_t dim, double lower, double upper) {
  return Box(std::vector<double>(dim, lower), std::vector<double>(dim, upper));
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  }
  return true;
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(Seed seed, std::initializer_list<std::uint64_t> stream_ids)
    : state_(mix64(seed.value + kGolden)) {
  for (std::uint64_t id : stream_ids) {
    state_ = mix64(state_ ^ mix64(id + kGolden));
  }
}

Rng::result_type Rng::operator()() {
  state_ += kGolden;
  return mix64(state_);
}

double Rng::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  // Lemire's multiply-shift with rejection.
  unsigned __int128 product =
      static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

Matrix uniform_mc(const Box& box, std::size_t count, Seed seed) {
  if (count == 0) throw Error("sample count must be positive");
  Matrix out(count, box.dim());
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(seed, {i});
    auto row = out.row(i);
    for (std::size_t j = 0; j < box.dim(); ++j) {
      row[j] = box.lower()[j] + rng.uniform() * box.width(j);
    }
  }
  return out;
}

Matrix sobol_sequence(int dim, std::size_t count) {
  if (dim < 1 || dim > kMaxSobolDim) {
    throw Error("sobol dimension must be in [1, " +
                std::to_string(kMaxSobolDim) + "], got " +
                std::to_string(dim));
  }
  if (count == 0) throw Error("sample count must be positive");
  constexpr int kBits = 32;
  if (count >= (std::size_t{1} << kBits)) {
    throw Error("sobol count exceeds 2^32 - 1");
  }

  // directions[j][k] is the k-th direction number of dimension j, scaled by
  // 2^32.
  std::vector<std::array<std::uint32_t, kBits>> directions(dim);
  for (int k = 0; k < kBits; ++k) {
    directions[0][k] = std::uint32_t{1} << (kBits - 1 - k);
  }
  for (int j = 1; j < dim; ++j) {
    const auto& row = detail::kSobolDirections[j];
    const int s = row.degree;
    const std::uint32_t inner = (row.polynomial >> 1) & ((1u << (s - 1)) - 1u);
    auto& v = directions[j];
    for (int k = 0; k < s && k < kBits; ++k) {
      v[k] = row.initial[k] << (kBits - 1 - k);
    }
    for (int k = s; k < kBits; ++k) {
      std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
      for (int l = 1; l < s; ++l) {
        if ((inner >> (s - 1 - l)) & 1u) value ^= v[k - l];
      }
      v[k] = value;
    }
  }

  Matrix out(count, dim);
  std::vector<std::uint32_t> state(dim, 0);
  for (std::size_t i = 0; i < count; ++i) {
    // Gray-code step: flip the direction of the lowest zero bit of i.
    const int bit = std::countr_one(i);
    for (int j = 0; j < dim; ++j) {
      state[j] ^= directions[j][bit];
      out(i, j) = static_cast<double>(state[j]) * 0x1.0p-32;
    }
  }
  return out;
}

Matrix scale_to_box(const Matrix& points, const Box& box) {
  if (points.cols() != box.dim()) {
    throw Error("point dimension " + std::to_string(points.cols()) +
                " does not match box dimension " + std::to_string(box.dim()));
  }
  Matrix out(points.rows(), points.cols());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    for (std::size_t j = 0; j < points.cols(); ++j) {
      out(i, j) = box.lower()[j] + points(i, j) * box.width(j);
    }
  }
  return out;
}

}  // namespace quantopt
