// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace glint {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EmptySceneError : public Error {
  public:
    EmptySceneError() : Error("empty scene") {}
};

}  // namespace glint
