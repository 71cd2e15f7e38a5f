// Copyright 2026 The sonosynth Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "sonosynth/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return sonosynth::cli::run(args, std::cout, std::cerr);
}
