// Copyright (c) 2026 the igstqa authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace igstqa {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Unreadable, malformed or out-of-contract input (images, payloads, manifests).
class InputError : public Error {
public:
  using Error::Error;
};

/// Incompatible configuration, e.g. feature sets extracted with different
/// levels or domains than the scoring run expects.
class MismatchError : public Error {
public:
  using Error::Error;
};

/// Not enough data to compute the requested statistic.
class InsufficientDataError : public Error {
public:
  using Error::Error;
};

/// Internal numerical failure (non-finite intermediate values and the like).
class NumericalError : public Error {
public:
  using Error::Error;
};

}  // namespace igstqa
