#pragma once

#include <stdexcept>
#include <string>

namespace hug {

/// Malformed or inconsistent caller input (bad file, bad shape, bad flag).
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite values or numerically unusable state detected mid-computation.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hug
