// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sonosynth::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kValidation = 3 };

/// Entry point of the `sonosynth` tool. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sonosynth::cli
