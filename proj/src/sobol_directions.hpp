#ifndef QUANTOPT_SRC_SOBOL_DIRECTIONS_HPP_
#define QUANTOPT_SRC_SOBOL_DIRECTIONS_HPP_

#include <array>
#include <cstdint>

namespace quantopt::detail {

struct SobolDirection {
  std::uint32_t polynomial;  // primitive polynomial incl. leading and constant terms
  int degree;
  std::array<std::uint32_t, 18> initial;
};

// Joe & Kuo (2008) "new-joe-kuo-6.21201" direction numbers, first 64 rows.
// Row 0 is the van der Corput dimension.
extern const std::array<SobolDirection, 64> kSobolDirections;

}  // namespace quantopt::detail

#endif  // QUANTOPT_SRC_SOBOL_DIRECTIONS_HPP_
