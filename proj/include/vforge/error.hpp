/**
 * Copyright 2026 The vicinity-forge Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef VFORGE_ERROR_HPP
#define VFORGE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace vforge {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, inconsistent or missing input data. Maps to CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

/// A parsing failure tied to a location in an input file.
class ParseError : public DataError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : DataError(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

/// x_i and x_j are colinear (or one of them is zero), so no angle can be split.
class DegenerateAngle : public DataError {
 public:
  using DataError::DataError;
};

/// The requested interpolation angle does not lie strictly inside (0, alpha).
class OutOfRangeTheta : public DataError {
 public:
  using DataError::DataError;
};

class ExhaustedPairs : public DataError {
 public:
  using DataError::DataError;
};

class UndefinedCorrelation : public DataError {
 public:
  using DataError::DataError;
};

/// An internal invariant did not hold. Maps to CLI exit code 3.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace vforge

#endif  // VFORGE_ERROR_HPP
