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


#include "dense_oracle.hpp"

#include <gtest/gtest.h>

using namespace fbmc;

namespace
{
    TimeSignal random_signal(std::size_t antennas, std::size_t len, std::uint64_t seed)
    {
        Rng rng(seed);
        TimeSignal s;
        for (std::size_t a = 0; a < antennas; ++a)
        {
            Eigen::VectorXcd v(ix(len));
            for (Eigen::Index t = 0; t < v.size(); ++t)
                v[t] = rng.complex_normal();
            s.streams.push_back(v);
        }
        return s;
    }

    double lin(double db) { return std::pow(10.0, db / 10.0); }
}

TEST(Epa, QuantizedAtLowSampleRate)
{
    // 1.92 MHz: 410 ns rounds to one sample, every other delay to zero
    const TapProfile p = epa_profile(1.92e6);
    ASSERT_EQ(p.taps(), 2u);
    EXPECT_EQ(p.delays, (std::vector<std::size_t>{0, 1}));
    const double head = lin(0) + lin(-1) + lin(-2) + lin(-3) + lin(-8) + lin(-17.2);
    const double tail = lin(-20.8);
    EXPECT_NEAR(p.powers[0], head / (head + tail), 1e-15);
    EXPECT_NEAR(p.powers[1], tail / (head + tail), 1e-15);
    EXPECT_FALSE(p.degenerate);
    EXPECT_NO_THROW(p.validate());
}

TEST(Epa, QuantizedAtHighSampleRate)
{
    // 30.72 MHz: delays 0, 0.92, 2.15, 2.76, 3.38, 5.84, 12.6 samples
    const TapProfile p = epa_profile(30.72e6);
    EXPECT_EQ(p.delays, (std::vector<std::size_t>{0, 1, 2, 3, 6, 13}));
    const double total = lin(0) + lin(-1) + lin(-2) + lin(-3) + lin(-8) + lin(-17.2) + lin(-20.8);
    EXPECT_NEAR(p.powers[3], (lin(-3) + lin(-8)) / total, 1e-15);
    EXPECT_EQ(p.span(), 14u);
}

TEST(Epa, TableFileMatchesBuiltIn)
{
    const TapProfile f = load_profile(std::filesystem::path(FBMCLAB_SOURCE_DIR) / "data/channel/epa.txt", 30.72e6);
    const TapProfile b = epa_profile(30.72e6);
    EXPECT_EQ(f.delays, b.delays);
    for (std::size_t l = 0; l < f.taps(); ++l)
        EXPECT_NEAR(f.powers[l], b.powers[l], 1e-15);
}

TEST(Channel, DegenerateProfileFlagged)
{
    const TapProfile p = quantize_profile({{0, 0.0}, {50, -3.0}}, 1e6);
    EXPECT_TRUE(p.degenerate);
    EXPECT_EQ(p.taps(), 1u);
    EXPECT_DOUBLE_EQ(p.powers[0], 1.0);
}

TEST(Channel, MatchesTripleLoopConvolution)
{
    const MimoChannel ch = draw_channel(epa_profile(30.72e6), 2, 3, 64, 99);
    const TimeSignal x = random_signal(2, 300, 5);
    const TimeSignal got = apply_channel(x, ch, 0.0, 0);
    const TimeSignal ref = oracle::convolve(x, ch);
    ASSERT_EQ(got.antennas(), 3u);
    for (std::size_t r = 0; r < 3; ++r)
        EXPECT_LT((got.streams[r] - ref.streams[r]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Channel, FrequencyResponseIsTapDft)
{
    const std::size_t n = 32;
    const MimoChannel ch = draw_channel(epa_profile(30.72e6), 2, 2, n, 4);
    ASSERT_EQ(ch.freq.size(), n);
    for (std::size_t k = 0; k < n; ++k)
    {
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(2, 2);
        for (std::size_t l = 0; l < ch.taps.size(); ++l)
            c += ch.taps[l] * std::exp(cplx(0, -2.0 * M_PI * double(k) * double(ch.delays[l]) / double(n)));
        EXPECT_LT((c - ch.freq[k]).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Channel, CyclicallyExtendedBlockSeesOneTapPerSubcarrier)
{
    const std::size_t n = 32, cp = 16;
    const MimoChannel ch = draw_channel(epa_profile(30.72e6), 2, 2, n, 8);
    const TimeSignal body = random_signal(2, n, 3);
    TimeSignal x;
    for (const auto &s : body.streams)
    {
        Eigen::VectorXcd v(ix(n + cp));
        v << s.tail(ix(cp)), s;
        x.streams.push_back(v);
    }
    const TimeSignal y = apply_channel(x, ch, 0.0, 0);
    UnitaryDft dft(n);
    std::vector<Eigen::VectorXcd> xf, yf;
    for (std::size_t a = 0; a < 2; ++a)
    {
        xf.push_back(dft.forward(body.streams[a]));
        yf.push_back(dft.forward(Eigen::VectorXcd(y.streams[a].tail(ix(n)))));
    }
    for (std::size_t k = 0; k < n; ++k)
    {
        Eigen::Vector2cd xv(xf[0][ix(k)], xf[1][ix(k)]), yv(yf[0][ix(k)], yf[1][ix(k)]);
        EXPECT_LT((ch.freq[k] * xv - yv).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Channel, LinearAndNoiseCalibrated)
{
    const MimoChannel ch = draw_channel(epa_profile(30.72e6), 2, 2, 64, 1);
    const TimeSignal a = random_signal(2, 200, 1), b = random_signal(2, 200, 2);
    TimeSignal mix;
    const cplx ca(0.3, -1.2), cb(-2.0, 0.5);
    for (std::size_t j = 0; j < 2; ++j)
        mix.streams.push_back(ca * a.streams[j] + cb * b.streams[j]);
    const TimeSignal ya = apply_channel(a, ch, 0, 0), yb = apply_channel(b, ch, 0, 0), ym = apply_channel(mix, ch, 0, 0);
    for (std::size_t r = 0; r < 2; ++r)
        EXPECT_LT((ym.streams[r] - ca * ya.streams[r] - cb * yb.streams[r]).cwiseAbs().maxCoeff(), 1e-12);

    TimeSignal zero;
    zero.streams.assign(2, Eigen::VectorXcd::Zero(40000));
    const TimeSignal noise = apply_channel(zero, ch, 0.25, 77);
    EXPECT_NEAR(noise.streams[0].squaredNorm() / 40000.0, 0.25, 0.01);
    EXPECT_EQ(apply_channel(zero, ch, 0.25, 77).streams[1], noise.streams[1]);
}

TEST(Channel, TapPowersFollowProfile)
{
    const TapProfile p = epa_profile(30.72e6);
    std::vector<double> acc(p.taps(), 0.0);
    const int draws = 4000;
    for (int d = 0; d < draws; ++d)
    {
        const MimoChannel ch = draw_channel(p, 1, 1, 32, derive_seed(1, RngPurpose::channel, {std::uint64_t(d)}));
        for (std::size_t l = 0; l < p.taps(); ++l)
            acc[l] += std::norm(ch.taps[l](0, 0));
    }
    for (std::size_t l = 0; l < p.taps(); ++l)
        EXPECT_NEAR(acc[l] / draws, p.powers[l], 0.1 * p.powers[l] + 1e-4) << "tap " << l;
}

TEST(Channel, ShapeErrors)
{
    const MimoChannel ch = identity_channel(2, 2, 16);
    EXPECT_THROW(apply_channel(random_signal(3, 10, 1), ch, 0, 0), ShapeError);
    TapProfile bad{{0, 1}, {0.5, 0.6}, false};
    EXPECT_THROW(bad.validate(), ConfigError);
}
