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


#include "fbmc/fbmc.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fbmc;

namespace
{
    // Gray PAM levels written out by hand, indexed by the axis bit pattern
    // (first bit most significant), before normalization.
    double hand_level(Modulation mod, unsigned pattern)
    {
        static const double qpsk[] = {1, -1};
        static const double q16[] = {1, 3, -1, -3};                     // 00 01 10 11
        static const double q64[] = {3, 1, 5, 7, -3, -1, -5, -7};        // 000 .. 111
        switch (mod)
        {
        case Modulation::qpsk:
            return qpsk[pattern];
        case Modulation::qam16:
            return q16[pattern];
        case Modulation::qam64:
            return q64[pattern];
        }
        return 0;
    }
}

TEST(Qam, LevelsMatchHandTables)
{
    const std::pair<Modulation, double> mods[] = {{Modulation::qpsk, 2.0}, {Modulation::qam16, 10.0}, {Modulation::qam64, 42.0}};
    for (auto [mod, e] : mods)
    {
        const std::size_t k = bits_per_symbol(mod) / 2;
        for (unsigned p = 0; p < (1u << k); ++p)
        {
            std::uint8_t bits[6] = {};
            for (std::size_t i = 0; i < k; ++i)
                bits[2 * i] = (p >> (k - 1 - i)) & 1u;
            const cplx s = map_symbol(bits, mod, 1.0);
            EXPECT_NEAR(s.real(), hand_level(mod, p) / std::sqrt(e), 1e-15) << to_string(mod) << " pattern " << p;
        }
    }
}

TEST(Qam, GrayNeighboursDifferInOneBit)
{
    for (Modulation mod : {Modulation::qam16, Modulation::qam64})
    {
        const std::size_t k = bits_per_symbol(mod) / 2;
        std::vector<std::pair<double, unsigned>> lv;
        for (unsigned p = 0; p < (1u << k); ++p)
            lv.push_back({hand_level(mod, p), p});
        std::sort(lv.begin(), lv.end());
        for (std::size_t i = 1; i < lv.size(); ++i)
            EXPECT_EQ(std::popcount(lv[i].second ^ lv[i - 1].second), 1);
    }
}

TEST(Qam, UnitAverageEnergyAndRoundTrip)
{
    for (Modulation mod : {Modulation::qpsk, Modulation::qam16, Modulation::qam64})
    {
        const std::size_t bps = bits_per_symbol(mod), count = std::size_t(1) << bps;
        Bits bits;
        for (std::size_t s = 0; s < count; ++s)
            for (std::size_t b = 0; b < bps; ++b)
                bits.push_back(std::uint8_t((s >> b) & 1u));
        const SymbolGrid g = map_qam(bits, mod, count, 1, 1, 2.5);
        EXPECT_NEAR(g.entries.cwiseAbs2().mean(), 2.5, 1e-12) << to_string(mod);
        EXPECT_EQ(demap_qam(g, mod, 2.5), bits);
    }
}

TEST(Qam, SlicerTiesAndWrongLength)
{
    // exactly between +1 and -1: lexicographically smallest pattern (bit 0) wins
    EXPECT_EQ(slice_axis_pattern(0.0, Modulation::qpsk, 1.0), 0u);
    EXPECT_GT(slice_axis(0.0, Modulation::qpsk, 1.0), 0.0);
    Bits short_bits(7, 0);
    EXPECT_THROW(map_qam(short_bits, Modulation::qpsk, 2, 1, 2), ShapeError);
}

TEST(Rng, DerivedSeedsAreDeterministicAndDistinct)
{
    EXPECT_EQ(derive_seed(5, RngPurpose::noise, {1, 2}), derive_seed(5, RngPurpose::noise, {1, 2}));
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 200; ++t)
        for (RngPurpose p : {RngPurpose::bits, RngPurpose::channel, RngPurpose::noise})
            seen.insert(derive_seed(5, p, {t}));
    EXPECT_EQ(seen.size(), 600u);
    Rng a(9), b(9);
    EXPECT_EQ(a.bits(1000), b.bits(1000));
    double acc = 0;
    Rng c(3);
    for (int i = 0; i < 20000; ++i)
        acc += std::norm(c.complex_normal(2.0));
    EXPECT_NEAR(acc / 20000, 2.0, 0.08);
}

TEST(Config, ValidationRules)
{
    FbmcConfig c;
    EXPECT_NO_THROW(c.validate());
    c.n_subcarriers = 48;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.n_tx = 4;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.cut = {3, 3};
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    EXPECT_NO_THROW(c.validate_channel_span(32));
    EXPECT_THROW(c.validate_channel_span(33), ConfigError);
}

TEST(Config, TextRoundTrip)
{
    FbmcConfig c;
    c.n_subcarriers = 128;
    c.block_len = 5;
    c.overlap = 5;
    c.n_tx = 1;
    c.n_rx = 3;
    c.cut = {2, 1};
    c.modulation = Modulation::qam64;
    c.equalizer = EqualizerKind::zf;
    c.symbol_power = 0.1;
    c.noise_power = 1.0 / 3.0;
    c.seed = 123456789012345ull;
    const FbmcConfig d = parse_fbmc_config(to_config_text(c));
    EXPECT_EQ(d.n_subcarriers, c.n_subcarriers);
    EXPECT_EQ(d.block_len, c.block_len);
    EXPECT_EQ(d.overlap, c.overlap);
    EXPECT_EQ(d.n_tx, c.n_tx);
    EXPECT_EQ(d.n_rx, c.n_rx);
    EXPECT_EQ(d.cut, c.cut);
    EXPECT_EQ(d.modulation, c.modulation);
    EXPECT_EQ(d.equalizer, c.equalizer);
    EXPECT_EQ(d.symbol_power, c.symbol_power);
    EXPECT_EQ(d.noise_power, c.noise_power);
    EXPECT_EQ(d.seed, c.seed);
}

TEST(Config, ErrorsCarryLineNumbers)
{
    const char *text = "[system]\nsubcarriers = 64\n\nmodulation = qam32\n";
    try
    {
        parse_fbmc_config(text);
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError &e)
    {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
    }
    try
    {
        ConfigDocument::parse("[a]\nx = 1\nx = 2\n");
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError &e)
    {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(ConfigDocument::parse("[a\n"), ConfigError);
    EXPECT_THROW(ConfigDocument::parse("novalue\n"), ConfigError);
    try
    {
        read_scenario(ConfigDocument::parse("[system]\nsubcarriers = 64\n[simulation]\nbogus = 1\n"));
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError &e)
    {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(Config, ListsAndRanges)
{
    const auto d = ConfigDocument::parse("[s]\nv = 0:5:20\nw = 1, 2.5 ,4 # trailing\n");
    EXPECT_EQ(d.get_double_list("s.v", {}), (std::vector<double>{0, 5, 10, 15, 20}));
    EXPECT_EQ(d.get_double_list("s.w", {}), (std::vector<double>{1, 2.5, 4}));
}

TEST(Config, ShippedScenariosLoad)
{
    for (const char *name : {"default.ini", "qam64.ini", "smoke.ini"})
        EXPECT_NO_THROW(load_scenario(std::filesystem::path(FBMCLAB_SOURCE_DIR) / "configs" / name)) << name;
}

TEST(Grid, LayoutAndBranchSplit)
{
    SymbolGrid g(4, 2, 3);
    g.at(1, 1, 2) = cplx(3, -4);
    EXPECT_EQ(g.entries(1 * 2 + 1, 2), cplx(3, -4));
    EXPECT_EQ(g.stream(1)(1, 2), cplx(3, -4));
    const BranchGrid b = split_oqam(g);
    EXPECT_EQ(b.stream(Branch::in_phase, 1)(1, 2), 3.0);
    EXPECT_EQ(b.stream(Branch::quadrature, 1)(1, 2), -4.0);
    EXPECT_EQ(recombine(b).entries, g.entries);
}
