// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcdc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration or argument violates a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class CodeConstructionError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class NotEnoughResults : public Error {
 public:
  using Error::Error;
};

// Residual above tolerance: the code itself is broken.
class DecodeFailure : public Error {
 public:
  using Error::Error;
};

class NotDecodable : public Error {
 public:
  NotDecodable(const std::string& what, std::vector<int> clusters)
      : Error(what), clusters_(std::move(clusters)) {}

  const std::vector<int>& clusters() const noexcept { return clusters_; }

 private:
  std::vector<int> clusters_;
};

}  // namespace gcdc
