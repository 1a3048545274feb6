// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semcom {

// Root of every error thrown by the library. Callers that only care about
// "something in semcom failed" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file header. `offset` is the byte position where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class TruncatedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Argument outside an operation's domain (d = 0, image too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class TooSmallError : public Error {
 public:
  using Error::Error;
};

class MissingMapError : public Error {
 public:
  explicit MissingMapError(std::string path)
      : Error("missing semantic map: " + path), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class CorruptPayloadError : public Error {
 public:
  using Error::Error;
};

// Even the uncompressed representation misses the service threshold.
class ValidationFailedError : public Error {
 public:
  ValidationFailedError(const std::string& what, double best_quality)
      : Error(what), best_quality_(best_quality) {}
  double best_quality() const noexcept { return best_quality_; }

 private:
  double best_quality_;
};

// Joint action space exceeds the enumeration guard.
class TooLargeError : public Error {
 public:
  using Error::Error;
};

// Bad experiment configuration (unknown key, bad value, missing file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace semcom
