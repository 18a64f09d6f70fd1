#ifndef ASPROX_LIBSVM_HPP
#define ASPROX_LIBSVM_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "asprox/problem.hpp"

namespace asprox {

/// Malformed or unusable input data. Carries the 1-based line number when
/// the problem is tied to a line (0 otherwise).
class data_error : public std::runtime_error {
 public:
  data_error(const std::string &what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// How raw labels map to {-1, +1}.
enum class label_mapping {
  signed_unit,  ///< -1 -> -1, +1 -> +1
  zero_one,     ///< 0 -> -1, 1 -> +1
  one_two,      ///< 1 -> -1, 2 -> +1 (e.g. covtype.binary)
};

label_mapping parse_label_mapping(std::string_view name);

struct libsvm_options {
  label_mapping labels = label_mapping::signed_unit;
  /// Feature dimension; defaults to the largest index seen (at least 1).
  std::optional<std::size_t> dim;
};

/// Parses `label idx:val idx:val ...` lines with 1-based feature indices.
/// Blank lines and text after '#' are ignored. Indices within a line may come
/// in any order but must not repeat.
dataset parse_libsvm(std::istream &in, const libsvm_options &opts = {});
dataset parse_libsvm(const std::filesystem::path &path,
                     const libsvm_options &opts = {});

/// Writes labels as +1 / -1 and values with 17 significant digits, so that
/// parse_libsvm reproduces the dataset exactly.
void write_libsvm(const dataset &data, std::ostream &out);
void write_libsvm(const dataset &data, const std::filesystem::path &path);

}  // namespace asprox

#endif  // ASPROX_LIBSVM_HPP
