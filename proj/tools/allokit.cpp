// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "allokit/cli.hpp"

int main(int argc, char** argv) {
  return allokit::cli::run(argc, argv, std::cout, std::cerr);
}
