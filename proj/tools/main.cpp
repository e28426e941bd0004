// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "glint/cli.hpp"

int main(int argc, char **argv) {
    return glint::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
