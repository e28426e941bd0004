// Copyright 2026 The Glint Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glint::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// `args` excludes the program and subcommand names.
int cmd_render(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int cmd_bench(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int cmd_generate(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Dispatches on the first argument (render | bench | generate).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace glint::cli
