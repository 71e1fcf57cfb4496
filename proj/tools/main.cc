// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <iostream>

#include "cli.h"

int main(int argc, char **argv) {
  return simulst::cli::Dispatch(argc, argv, std::cout, std::cerr);
}
