// SPDX-FileCopyrightText: © 2026 The dualgrad authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dualgrad {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or shape mismatch between operands.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

class DataFormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The unstabilized dual rule needs eta * |grad| <= 1 for every neuron.
class UpdateRateOverflow : public Error {
 public:
  UpdateRateOverflow(std::size_t neuron, double rate)
      : Error("update rate " + std::to_string(rate) + " > 1 at neuron " + std::to_string(neuron)),
        neuron_(neuron),
        rate_(rate) {}

  std::size_t neuron() const noexcept { return neuron_; }
  double rate() const noexcept { return rate_; }

 private:
  std::size_t neuron_;
  double rate_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(long iteration)
      : Error("non-finite loss at iteration " + std::to_string(iteration)), iteration_(iteration) {}

  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

}  // namespace dualgrad
