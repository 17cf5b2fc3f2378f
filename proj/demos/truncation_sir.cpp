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


// Prints the worst per-symbol SIR of every truncation case for the IOTA
// filter at N = 64, M = 8, K = 6, before and after compensation.

#include "fbmc/fbmc.hpp"

#include <cstdio>

int main()
{
    using namespace fbmc;
    const std::size_t n = 64, k = 6, m = 8;
    const PrototypeFilter f = generate_iota(n, k);
    std::printf("%-20s %8s %22s %22s\n", "case", "cut", "worst SIR (dB)", "compensated (dB)");
    for (TruncationCase c : {TruncationCase::use_it_all, TruncationCase::one_front_and_end, TruncationCase::one_front,
                             TruncationCase::one_end, TruncationCase::same_length})
    {
        const Truncation cut = truncation_case(k, c);
        const SirReport plain = sir_table(f, m, cut);
        SirOptions o;
        o.compensated = true;
        const SirReport comp = sir_table(f, m, cut, o);
        const SirRow &w = plain.worst();
        const SirRow &wc = comp.worst();
        std::printf("%-20s   (%zu,%zu) %10.2f at %s,%zu %10.2f at %s,%zu\n", to_string(c).c_str(), cut.front, cut.rear,
                    w.sir_db, w.branch == Branch::in_phase ? "I" : "Q", w.m, wc.sir_db,
                    wc.branch == Branch::in_phase ? "I" : "Q", wc.m);
    }
    return 0;
}
