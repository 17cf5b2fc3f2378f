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


// One 2x2 block over an EPA channel: QPSK in, same-length truncation,
// decision-directed compensation, symbol errors out.

#include "fbmc/fbmc.hpp"

#include <cstdio>

int main()
{
    using namespace fbmc;
    FbmcConfig cfg;
    cfg.cut = truncation_case(cfg.overlap, TruncationCase::same_length);
    cfg.noise_power = noise_for_ebn0(20.0, cfg.symbol_power, 2.0);
    const PrototypeFilter f = generate_iota(cfg.n_subcarriers, cfg.overlap);
    const Transceiver trx(cfg, f);

    Bits bits;
    const SymbolGrid grid = random_grid(cfg, derive_seed(cfg.seed, RngPurpose::bits, {0}), &bits);
    const MimoChannel ch = draw_channel(epa_profile(1.92e6), cfg.n_tx, cfg.n_rx, cfg.n_subcarriers,
                                        derive_seed(cfg.seed, RngPurpose::channel, {0}));
    CompensationOptions co;
    co.solver = CompensationSolver::mmse;
    co.regularization = cfg.noise_power / cfg.symbol_power;
    const CompensationSet set = CompensationSet::build(f, cfg.block_len, cfg.cut, co);

    for (CompensationMode mode : {CompensationMode::off, CompensationMode::decision_directed})
    {
        const SymbolGrid est = fbmc_block(trx, grid, ch, cfg.noise_power, derive_seed(cfg.seed, RngPurpose::noise, {0}), &set, mode);
        const Bits rx = demap_qam(est, cfg.modulation, cfg.symbol_power);
        std::size_t errors = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            errors += bits[i] != rx[i];
        std::printf("compensation %-3s: %zu bit errors out of %zu\n", to_string(mode).c_str(), errors, bits.size());
    }
    return 0;
}
