// SPDX-License-Identifier: Apache-2.0
//
// fbmclab - MIMO-FBMC/OQAM link-level simulation library
// Copyright (C) 2026 The fbmclab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef fbmc_cli_H
#define fbmc_cli_H

#include <ostream>
#include <string>
#include <vector>

namespace fbmc
{
    // Exit codes of run_cli
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_failure = 1;
    inline constexpr int exit_config = 2;

    // Command-line front end. Subcommands: sir, ber, se, ofdm, dump-kernels.
    // Results go to --out or `out`, progress and diagnostics to `err`.
    int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err);
    int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);
}

#endif
