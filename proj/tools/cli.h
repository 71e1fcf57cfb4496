// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_TOOLS_CLI_H_
#define SIMULST_TOOLS_CLI_H_

#include <iosfwd>

namespace simulst::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline constexpr const char *kVersion = "0.1.0";

// Parses argv and runs the selected subcommand. Results go to `out`,
// diagnostics to `err`.
int Dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace simulst::cli

#endif  // SIMULST_TOOLS_CLI_H_
