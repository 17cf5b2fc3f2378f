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

#ifndef fbmc_core_model_H
#define fbmc_core_model_H

#include "fbmc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbmc
{
    using cplx = std::complex<double>;
    using Bits = std::vector<std::uint8_t>;

    inline constexpr Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

    enum class Branch
    {
        in_phase = 0,   // real part, "I" branch
        quadrature = 1, // imaginary part, "Q" branch
    };

    enum class Modulation
    {
        qpsk = 4,
        qam16 = 16,
        qam64 = 64,
    };

    enum class EqualizerKind
    {
        zf = 0,
        mmse = 1,
    };

    inline constexpr std::size_t bits_per_symbol(Modulation mod)
    {
        switch (mod)
        {
        case Modulation::qpsk:
            return 2;
        case Modulation::qam16:
            return 4;
        case Modulation::qam64:
            return 6;
        }
        return 0;
    }

    inline std::string to_string(Modulation mod)
    {
        switch (mod)
        {
        case Modulation::qpsk:
            return "QPSK";
        case Modulation::qam16:
            return "16QAM";
        case Modulation::qam64:
            return "64QAM";
        }
        return "?";
    }

    inline std::string to_string(Branch b) { return b == Branch::in_phase ? "I" : "Q"; }
    inline std::string to_string(EqualizerKind e) { return e == EqualizerKind::zf ? "zf" : "mmse"; }

    inline std::string lowercase(std::string_view s)
    {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c)
                       { return static_cast<char>(std::tolower(c)); });
        return out;
    }

    inline Modulation parse_modulation(std::string_view name)
    {
        const std::string s = lowercase(name);
        if (s == "qpsk" || s == "4qam")
            return Modulation::qpsk;
        if (s == "16qam")
            return Modulation::qam16;
        if (s == "64qam")
            return Modulation::qam64;
        throw ConfigError("unknown modulation '" + std::string(name) + "' (expected QPSK, 16QAM or 64QAM)");
    }

    inline EqualizerKind parse_equalizer(std::string_view name)
    {
        const std::string s = lowercase(name);
        if (s == "zf" || s == "0")
            return EqualizerKind::zf;
        if (s == "mmse" || s == "1")
            return EqualizerKind::mmse;
        throw ConfigError("unknown equalizer '" + std::string(name) + "' (expected zf or mmse)");
    }

    inline constexpr bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

    struct Truncation
    {
        std::size_t front = 0; // i_F, leading filter-output symbols removed
        std::size_t rear = 0;  // i_R, trailing filter-output symbols removed

        std::size_t total() const { return front + rear; }
        bool none() const { return front == 0 && rear == 0; }
        friend bool operator==(const Truncation &, const Truncation &) = default;
    };

    struct FbmcConfig
    {
        std::size_t n_subcarriers = 64; // N
        std::size_t block_len = 8;      // M
        std::size_t overlap = 6;        // K
        std::size_t n_tx = 2;
        std::size_t n_rx = 2;
        Truncation cut{};
        Modulation modulation = Modulation::qpsk;
        EqualizerKind equalizer = EqualizerKind::mmse;
        double symbol_power = 1.0; // delta^2
        double noise_power = 0.0;  // sigma^2 per complex sample
        std::uint64_t seed = 1;

        std::size_t block_rows() const { return overlap + block_len - 1 - cut.total(); }

        void validate() const
        {
            if (!is_power_of_two(n_subcarriers) || n_subcarriers < 2)
                throw ConfigError("n_subcarriers must be a power of two >= 2, got " + std::to_string(n_subcarriers));
            if (block_len < 1)
                throw ConfigError("block_len must be positive");
            if (overlap < 2)
                throw ConfigError("overlap must be at least 2, got " + std::to_string(overlap));
            if (n_tx < 1 || n_rx < 1)
                throw ConfigError("antenna counts must be positive");
            if (n_tx > n_rx)
                throw ConfigError("n_tx (" + std::to_string(n_tx) + ") must not exceed n_rx (" + std::to_string(n_rx) + ")");
            if (cut.total() > overlap - 1)
                throw ConfigError("cut_front + cut_rear = " + std::to_string(cut.total()) +
                                  " exceeds overlap - 1 = " + std::to_string(overlap - 1));
            if (!(symbol_power > 0.0) || !std::isfinite(symbol_power))
                throw ConfigError("symbol_power must be positive");
            if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
                throw ConfigError("noise_power must be non-negative");
        }

        // N >= 2 L for an attached channel with L taps (delay span + 1).
        void validate_channel_span(std::size_t channel_len) const
        {
            if (n_subcarriers < 2 * channel_len)
                throw ConfigError("n_subcarriers = " + std::to_string(n_subcarriers) +
                                  " is shorter than twice the channel length " + std::to_string(channel_len));
        }
    };

    // Symbol block S with one column per FBMC symbol. Row n * n_streams + j holds
    // subcarrier n of antenna stream j.
    struct SymbolGrid
    {
        Eigen::MatrixXcd entries;
        std::size_t n_subcarriers = 0;
        std::size_t n_streams = 0;

        SymbolGrid() = default;
        SymbolGrid(std::size_t n, std::size_t streams, std::size_t m)
            : entries(Eigen::MatrixXcd::Zero(ix(n * streams), ix(m))), n_subcarriers(n), n_streams(streams) {}

        std::size_t block_len() const { return std::size_t(entries.cols()); }
        cplx &at(std::size_t n, std::size_t j, std::size_t m) { return entries(ix(n * n_streams + j), ix(m)); }
        cplx at(std::size_t n, std::size_t j, std::size_t m) const { return entries(ix(n * n_streams + j), ix(m)); }

        // N x M matrix of stream j
        Eigen::MatrixXcd stream(std::size_t j) const
        {
            Eigen::MatrixXcd out(ix(n_subcarriers), entries.cols());
            for (Eigen::Index m = 0; m < entries.cols(); ++m)
                for (std::size_t n = 0; n < n_subcarriers; ++n)
                    out(ix(n), m) = entries(ix(n * n_streams + j), m);
            return out;
        }

        void set_stream(std::size_t j, const Eigen::MatrixXcd &s)
        {
            if (std::size_t(s.rows()) != n_subcarriers || s.cols() != entries.cols())
                throw ShapeError("set_stream: shape mismatch");
            for (Eigen::Index m = 0; m < entries.cols(); ++m)
                for (std::size_t n = 0; n < n_subcarriers; ++n)
                    entries(ix(n * n_streams + j), m) = s(ix(n), m);
        }
    };

    struct BranchGrid
    {
        Eigen::MatrixXd real_part; // S-bar
        Eigen::MatrixXd imag_part; // S-tilde
        std::size_t n_subcarriers = 0;
        std::size_t n_streams = 0;

        const Eigen::MatrixXd &branch(Branch b) const { return b == Branch::in_phase ? real_part : imag_part; }
        Eigen::MatrixXd &branch(Branch b) { return b == Branch::in_phase ? real_part : imag_part; }
        std::size_t block_len() const { return std::size_t(real_part.cols()); }

        // N x M matrix of one branch of stream j
        Eigen::MatrixXd stream(Branch b, std::size_t j) const
        {
            const Eigen::MatrixXd &src = branch(b);
            Eigen::MatrixXd out(ix(n_subcarriers), src.cols());
            for (Eigen::Index m = 0; m < src.cols(); ++m)
                for (std::size_t n = 0; n < n_subcarriers; ++n)
                    out(ix(n), m) = src(ix(n * n_streams + j), m);
            return out;
        }
    };

    inline BranchGrid split_oqam(const SymbolGrid &grid)
    {
        return BranchGrid{grid.entries.real(), grid.entries.imag(), grid.n_subcarriers, grid.n_streams};
    }

    inline SymbolGrid recombine(const BranchGrid &b)
    {
        if (b.real_part.rows() != b.imag_part.rows() || b.real_part.cols() != b.imag_part.cols())
            throw ShapeError("recombine: branch shapes differ");
        SymbolGrid g;
        g.n_subcarriers = b.n_subcarriers;
        g.n_streams = b.n_streams;
        g.entries = b.real_part.cast<cplx>() + cplx(0.0, 1.0) * b.imag_part.cast<cplx>();
        return g;
    }

    // ---------------------------------------------------------------------
    // Gray-mapped square QAM. Even bit positions drive the real axis, odd
    // positions the imaginary axis; each axis is a Gray-coded PAM.

    namespace detail
    {
        // PAM level for the axis bits b[0], b[1], ... (b[0] is the sign bit)
        inline double pam_level(const std::uint8_t *b, std::size_t k)
        {
            double v = 1.0;
            for (std::size_t i = k; i-- > 1;)
                v = double(1u << (k - i)) - (1.0 - 2.0 * b[i]) * v;
            return (1.0 - 2.0 * b[0]) * v;
        }

        inline double qam_norm(Modulation mod)
        {
            switch (mod)
            {
            case Modulation::qpsk:
                return std::sqrt(2.0);
            case Modulation::qam16:
                return std::sqrt(10.0);
            case Modulation::qam64:
                return std::sqrt(42.0);
            }
            return 1.0;
        }
    }

    // Amplitude scale that takes integer PAM levels to the configured symbol power.
    inline double axis_scale(Modulation mod, double symbol_power)
    {
        return std::sqrt(symbol_power) / detail::qam_norm(mod);
    }

    inline cplx map_symbol(const std::uint8_t *bits, Modulation mod, double symbol_power = 1.0)
    {
        const std::size_t k = bits_per_symbol(mod) / 2;
        std::array<std::uint8_t, 3> bi{}, bq{};
        for (std::size_t i = 0; i < k; ++i)
        {
            bi[i] = bits[2 * i] & 1u;
            bq[i] = bits[2 * i + 1] & 1u;
        }
        const double s = axis_scale(mod, symbol_power);
        return {s * detail::pam_level(bi.data(), k), s * detail::pam_level(bq.data(), k)};
    }

    // Nearest PAM level on one axis. Ties go to the lexicographically smallest pattern.
    inline unsigned slice_axis_pattern(double v, Modulation mod, double symbol_power)
    {
        const std::size_t k = bits_per_symbol(mod) / 2;
        const double s = axis_scale(mod, symbol_power);
        unsigned best = 0;
        double best_d = 0.0;
        for (unsigned p = 0; p < (1u << k); ++p)
        {
            std::array<std::uint8_t, 3> b{};
            for (std::size_t i = 0; i < k; ++i)
                b[i] = (p >> (k - 1 - i)) & 1u; // b[0] is the most significant
            const double d = std::abs(v - s * detail::pam_level(b.data(), k));
            if (p == 0 || d < best_d)
            {
                best = p;
                best_d = d;
            }
        }
        return best;
    }

    inline double slice_axis(double v, Modulation mod, double symbol_power)
    {
        const std::size_t k = bits_per_symbol(mod) / 2;
        const unsigned p = slice_axis_pattern(v, mod, symbol_power);
        std::array<std::uint8_t, 3> b{};
        for (std::size_t i = 0; i < k; ++i)
            b[i] = (p >> (k - 1 - i)) & 1u;
        return axis_scale(mod, symbol_power) * detail::pam_level(b.data(), k);
    }

    inline cplx slice_symbol(cplx v, Modulation mod, double symbol_power)
    {
        return {slice_axis(v.real(), mod, symbol_power), slice_axis(v.imag(), mod, symbol_power)};
    }

    inline SymbolGrid map_qam(std::span<const std::uint8_t> bits, Modulation mod, std::size_t n, std::size_t streams,
                              std::size_t m, double symbol_power = 1.0)
    {
        const std::size_t bps = bits_per_symbol(mod);
        const std::size_t need = bps * n * streams * m;
        if (bits.size() != need)
            throw ShapeError("map_qam: got " + std::to_string(bits.size()) + " bits, a " + std::to_string(n) + "x" +
                             std::to_string(streams) + "x" + std::to_string(m) + " " + to_string(mod) +
                             " grid needs " + std::to_string(need));
        SymbolGrid g(n, streams, m);
        cplx *out = g.entries.data();
        for (std::size_t s = 0; s < n * streams * m; ++s)
            out[s] = map_symbol(bits.data() + s * bps, mod, symbol_power);
        return g;
    }

    inline Bits demap_qam(const SymbolGrid &grid, Modulation mod, double symbol_power = 1.0)
    {
        const std::size_t bps = bits_per_symbol(mod), k = bps / 2;
        const std::size_t count = std::size_t(grid.entries.size());
        Bits bits(count * bps);
        const cplx *in = grid.entries.data();
        for (std::size_t s = 0; s < count; ++s)
        {
            const unsigned pi = slice_axis_pattern(in[s].real(), mod, symbol_power);
            const unsigned pq = slice_axis_pattern(in[s].imag(), mod, symbol_power);
            for (std::size_t i = 0; i < k; ++i)
            {
                bits[s * bps + 2 * i] = std::uint8_t((pi >> (k - 1 - i)) & 1u);
                bits[s * bps + 2 * i + 1] = std::uint8_t((pq >> (k - 1 - i)) & 1u);
            }
        }
        return bits;
    }

    // ---------------------------------------------------------------------
    // Seeded randomness. Every Monte-Carlo draw uses an engine whose seed is
    // derived from (seed, purpose, indices), so trials are reproducible and
    // independent of execution order.

    enum class RngPurpose : std::uint64_t
    {
        bits = 0x62697473,
        channel = 0x6368616e,
        noise = 0x6e6f6973,
        interleaver = 0x696c7672,
    };

    inline constexpr std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys)
    {
        std::uint64_t h = splitmix64(seed);
        for (std::uint64_t k : keys)
            h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ull));
        return h;
    }

    inline std::uint64_t derive_seed(std::uint64_t seed, RngPurpose p, std::initializer_list<std::uint64_t> keys)
    {
        std::uint64_t h = derive_seed(seed, {std::uint64_t(p)});
        for (std::uint64_t k : keys)
            h = derive_seed(h, {k});
        return h;
    }

    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(seed) {}

        Bits bits(std::size_t count)
        {
            Bits out(count);
            std::uint64_t word = 0;
            for (std::size_t i = 0; i < count; ++i)
            {
                if (i % 64 == 0)
                    word = engine_();
                out[i] = std::uint8_t((word >> (i % 64)) & 1u);
            }
            return out;
        }

        double normal() { return normal_(engine_); }

        // circularly-symmetric complex Gaussian with E|z|^2 = variance
        cplx complex_normal(double variance = 1.0)
        {
            const double s = std::sqrt(variance / 2.0);
            const double re = normal_(engine_);
            const double im = normal_(engine_);
            return {s * re, s * im};
        }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };

    inline SymbolGrid random_grid(const FbmcConfig &cfg, std::uint64_t seed, Bits *bits_out = nullptr)
    {
        Rng rng(seed);
        Bits b = rng.bits(bits_per_symbol(cfg.modulation) * cfg.n_subcarriers * cfg.n_tx * cfg.block_len);
        SymbolGrid g = map_qam(b, cfg.modulation, cfg.n_subcarriers, cfg.n_tx, cfg.block_len, cfg.symbol_power);
        if (bits_out)
            *bits_out = std::move(b);
        return g;
    }
}

#endif
