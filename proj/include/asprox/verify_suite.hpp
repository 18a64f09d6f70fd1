#ifndef ASPROX_VERIFY_SUITE_HPP
#define ASPROX_VERIFY_SUITE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "asprox/regularizers.hpp"

namespace asprox {

struct check_result {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct verify_options {
  /// Scalar prox under test; swapping it lets a test confirm the suite
  /// catches a broken operator.
  std::function<double(regularizer_kind, double, double)> prox = prox_scalar;
  std::uint64_t seed = 20240917;
};

/// Oracle checks over the problem, regularizer, sampling and optimizer
/// modules. Failures are reported, never thrown.
std::vector<check_result> run_verification_suite(const verify_options &opts = {});

/// Prints a pass/fail table; returns true iff every check passed.
bool print_verification_table(const std::vector<check_result> &results,
                              std::ostream &out);

}  // namespace asprox

#endif  // ASPROX_VERIFY_SUITE_HPP
