#ifndef QUANTOPT_ERROR_HPP_
#define QUANTOPT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace quantopt {

// Raised for contract violations (bad arguments, invalid configurations,
// evaluation failures). The message is meant for end users.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quantopt

#endif  // QUANTOPT_ERROR_HPP_
