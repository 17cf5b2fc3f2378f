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

#ifndef fbmc_channel_H
#define fbmc_channel_H

#include "fbmc/core_model.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fbmc
{
    // Per-antenna complex sample streams, all of equal length.
    struct TimeSignal
    {
        std::vector<Eigen::VectorXcd> streams;

        std::size_t length() const { return streams.empty() ? 0 : std::size_t(streams.front().size()); }
        std::size_t antennas() const { return streams.size(); }
    };

    struct TapProfile
    {
        std::vector<std::size_t> delays; // samples, ascending, delays[0] == 0
        std::vector<double> powers;      // linear, sum to one
        bool degenerate = false;         // quantization collapsed every tap onto sample 0

        std::size_t taps() const { return delays.size(); }
        std::size_t span() const { return delays.empty() ? 0 : delays.back() + 1; }

        void validate() const
        {
            if (delays.empty() || delays.size() != powers.size())
                throw ConfigError("tap profile: delays and powers must be non-empty and of equal length");
            if (delays.front() != 0)
                throw ConfigError("tap profile: first delay must be 0");
            for (std::size_t l = 1; l < delays.size(); ++l)
                if (delays[l] <= delays[l - 1])
                    throw ConfigError("tap profile: delays must be strictly ascending");
            double sum = 0.0;
            for (double p : powers)
            {
                if (!(p >= 0.0))
                    throw ConfigError("tap profile: negative tap power");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw ConfigError("tap profile: tap powers sum to " + std::to_string(sum) + ", expected 1");
        }
    };

    struct ContinuousTap
    {
        double delay_ns;
        double power_db;
    };

    // 3GPP Extended Pedestrian A.
    inline const std::vector<ContinuousTap> &epa_table()
    {
        static const std::vector<ContinuousTap> t{{0, 0.0}, {30, -1.0}, {70, -2.0}, {90, -3.0},
                                                  {110, -8.0}, {190, -17.2}, {410, -20.8}};
        return t;
    }

    // Round delays to the nearest sample, add the power of taps sharing a sample,
    // then normalize to unit total power.
    inline TapProfile quantize_profile(const std::vector<ContinuousTap> &taps, double sample_rate_hz)
    {
        if (!(sample_rate_hz > 0.0))
            throw ConfigError("sample rate must be positive");
        if (taps.empty())
            throw ConfigError("tap profile is empty");
        std::map<std::size_t, double> acc;
        for (const auto &t : taps)
        {
            if (t.delay_ns < 0.0)
                throw ConfigError("negative tap delay");
            acc[std::size_t(std::llround(t.delay_ns * 1e-9 * sample_rate_hz))] += std::pow(10.0, t.power_db / 10.0);
        }
        if (acc.begin()->first != 0)
            acc.emplace(0, 0.0); // keep the line-of-sight reference at sample 0
        TapProfile p;
        double total = 0.0;
        for (const auto &[d, pw] : acc)
        {
            p.delays.push_back(d);
            p.powers.push_back(pw);
            total += pw;
        }
        for (double &pw : p.powers)
            pw /= total;
        p.degenerate = p.delays.size() == 1;
        return p;
    }

    inline TapProfile epa_profile(double sample_rate_hz) { return quantize_profile(epa_table(), sample_rate_hz); }

    inline TapProfile flat_profile() { return TapProfile{{0}, {1.0}, true}; }

    // Two-column text file: delay_ns power_dB. '#' starts a comment.
    inline std::vector<ContinuousTap> load_tap_table(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw IoError("cannot open tap profile " + path.string());
        std::vector<ContinuousTap> taps;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (const auto h = line.find('#'); h != std::string::npos)
                line.erase(h);
            std::istringstream ls(line);
            ContinuousTap t{};
            if (!(ls >> t.delay_ns))
            {
                if (line.find_first_not_of(" \t\r,") != std::string::npos)
                    throw ConfigError("tap profile " + path.string() + ": expected 'delay_ns power_dB'", lineno);
                continue;
            }
            if (ls.peek() == ',')
                ls.get();
            std::string rest;
            if (!(ls >> t.power_db) || (ls >> rest))
                throw ConfigError("tap profile " + path.string() + ": expected 'delay_ns power_dB'", lineno);
            taps.push_back(t);
        }
        if (taps.empty())
            throw ConfigError("tap profile " + path.string() + " has no taps");
        return taps;
    }

    inline TapProfile load_profile(const std::filesystem::path &path, double sample_rate_hz)
    {
        return quantize_profile(load_tap_table(path), sample_rate_hz);
    }

    // Quasi-static MIMO channel: taps H_l = rho_l Z_l and the per-subcarrier
    // response C_n = sum_l H_l exp(-j 2 pi n d_l / N).
    struct MimoChannel
    {
        std::vector<std::size_t> delays;
        std::vector<Eigen::MatrixXcd> taps; // n_rx x n_tx each
        std::vector<Eigen::MatrixXcd> freq; // one per subcarrier

        std::size_t n_rx() const { return std::size_t(taps.front().rows()); }
        std::size_t n_tx() const { return std::size_t(taps.front().cols()); }
        std::size_t span() const { return delays.empty() ? 0 : delays.back() + 1; }

        void update_frequency_response(std::size_t n_subcarriers)
        {
            freq.assign(n_subcarriers, Eigen::MatrixXcd::Zero(taps.front().rows(), taps.front().cols()));
            for (std::size_t n = 0; n < n_subcarriers; ++n)
                for (std::size_t l = 0; l < taps.size(); ++l)
                {
                    const double ang = -2.0 * M_PI * double((n * delays[l]) % n_subcarriers) / double(n_subcarriers);
                    freq[n] += taps[l] * std::polar(1.0, ang);
                }
        }
    };

    inline MimoChannel draw_channel(const TapProfile &profile, std::size_t n_tx, std::size_t n_rx,
                                    std::size_t n_subcarriers, std::uint64_t seed)
    {
        profile.validate();
        Rng rng(seed);
        MimoChannel ch;
        ch.delays = profile.delays;
        for (std::size_t l = 0; l < profile.taps(); ++l)
        {
            Eigen::MatrixXcd h(ix(n_rx), ix(n_tx));
            const double rho = std::sqrt(profile.powers[l]);
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                for (Eigen::Index r = 0; r < h.rows(); ++r)
                    h(r, c) = rho * rng.complex_normal(1.0);
            ch.taps.push_back(std::move(h));
        }
        ch.update_frequency_response(n_subcarriers);
        return ch;
    }

    // Single tap with H_0 = [I; 0].
    inline MimoChannel identity_channel(std::size_t n_tx, std::size_t n_rx, std::size_t n_subcarriers)
    {
        MimoChannel ch;
        ch.delays = {0};
        ch.taps = {Eigen::MatrixXcd::Identity(ix(n_rx), ix(n_tx))};
        ch.update_frequency_response(n_subcarriers);
        return ch;
    }

    // r_i[t] = sum_l sum_j H_l[i,j] x_j[t - d_l] + n_i[t]; samples before t = 0 are
    // zero and the output keeps the input length.
    inline TimeSignal apply_channel(const TimeSignal &tx, const MimoChannel &ch, double noise_power, std::uint64_t seed)
    {
        if (tx.streams.size() != ch.n_tx())
            throw ShapeError("apply_channel: " + std::to_string(tx.streams.size()) + " tx streams for a channel with " +
                             std::to_string(ch.n_tx()) + " inputs");
        const std::size_t len = tx.length();
        for (const auto &s : tx.streams)
            if (std::size_t(s.size()) != len)
                throw ShapeError("apply_channel: tx streams differ in length");
        TimeSignal rx;
        rx.streams.assign(ch.n_rx(), Eigen::VectorXcd::Zero(ix(len)));
        for (std::size_t l = 0; l < ch.taps.size(); ++l)
        {
            const std::size_t d = ch.delays[l];
            if (d >= len)
                continue;
            const Eigen::Index cnt = ix(len - d);
            for (std::size_t i = 0; i < ch.n_rx(); ++i)
                for (std::size_t j = 0; j < ch.n_tx(); ++j)
                {
                    const cplx h = ch.taps[l](ix(i), ix(j));
                    if (h != cplx(0.0, 0.0))
                        rx.streams[i].segment(ix(d), cnt) += h * tx.streams[j].head(cnt);
                }
        }
        if (noise_power > 0.0)
        {
            Rng rng(seed);
            for (auto &s : rx.streams)
                for (Eigen::Index t = 0; t < s.size(); ++t)
                    s[t] += rng.complex_normal(noise_power);
        }
        return rx;
    }
}

#endif
