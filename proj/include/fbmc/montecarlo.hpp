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

#ifndef fbmc_montecarlo_H
#define fbmc_montecarlo_H

#include "fbmc/analysis.hpp"
#include "fbmc/conv_code.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

namespace fbmc
{
    // Worker count: explicit request, else FBMCLAB_THREADS, else the hardware count.
    inline std::size_t worker_count(std::size_t requested = 0)
    {
        if (requested > 0)
            return requested;
        if (const char *env = std::getenv("FBMCLAB_THREADS"))
        {
            char *end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (end != env && v > 0)
                return std::size_t(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    // Runs fn(i) for i in [0, count) on up to `threads` workers. The first
    // exception thrown by any task is rethrown on the caller.
    template <typename Fn>
    void parallel_for(std::size_t count, std::size_t threads, Fn &&fn)
    {
        threads = std::min(std::max<std::size_t>(threads, 1), count);
        if (threads <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                fn(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mutex;
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&]
                              {
                for (std::size_t i = next++; i < count; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(err_mutex);
                        if (!err)
                            err = std::current_exception();
                        next = count;
                    }
                } });
        pool.clear();
        if (err)
            std::rethrow_exception(err);
    }

    enum class BerScheme
    {
        use_it_all,
        one_front,
        same_length,
        compensated,
        ofdm,
    };

    inline std::string to_string(BerScheme s)
    {
        switch (s)
        {
        case BerScheme::use_it_all:
            return "use_it_all";
        case BerScheme::one_front:
            return "one_front";
        case BerScheme::same_length:
            return "same_length";
        case BerScheme::compensated:
            return "compensated";
        case BerScheme::ofdm:
            return "ofdm";
        }
        return "?";
    }

    inline BerScheme parse_ber_scheme(std::string_view s)
    {
        const std::string v = lowercase(s);
        for (BerScheme b : {BerScheme::use_it_all, BerScheme::one_front, BerScheme::same_length, BerScheme::compensated, BerScheme::ofdm})
            if (v == to_string(b))
                return b;
        throw ConfigError("unknown BER scheme '" + std::string(s) +
                          "' (expected use_it_all, one_front, same_length, compensated or ofdm)");
    }

    struct BerPoint
    {
        BerScheme scheme = BerScheme::use_it_all;
        double ebn0_db = 0.0;
        std::uint64_t bit_errors = 0;
        std::uint64_t bits = 0;
        std::uint64_t trials = 0;
        double ber = 0.0;
        double ci_low = 0.0; // 95 % Wilson interval
        double ci_high = 0.0;
        bool converged = false; // reached min_errors before max_trials
        std::string note;
    };

    // 95 % Wilson score interval for k successes in n trials.
    inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054)
    {
        if (n == 0)
            return {0.0, 1.0};
        const double nn = double(n), p = double(k) / nn, z2 = z * z;
        const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
        const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
        return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
    }

    struct LinkScenario
    {
        FbmcConfig system;
        PrototypeFilter filter;
        TapProfile profile = flat_profile();
    };

    struct BerSettings
    {
        std::vector<double> ebn0_db;
        std::size_t min_errors = 200;
        std::size_t max_trials = 2000;
        std::size_t min_trials = 0; // channel realizations per point before the error count may stop it
        std::size_t batch = 16; // stopping rule is checked after whole batches only
        std::size_t threads = 0;
        bool coded = false;
        CompensationMode compensation = CompensationMode::decision_directed;
        CompensationSolver solver = CompensationSolver::mmse;
        KernelModel kernel_model = KernelModel::truncation;
        std::size_t cp_len = 0; // OFDM cyclic prefix, 0 selects the default
        std::function<void(const BerPoint &)> progress;
    };

    inline std::size_t default_cp_length(std::size_t n, const TapProfile &profile)
    {
        const std::size_t lte = std::size_t(std::llround(double(n) * 144.0 / 2048.0));
        return std::max(lte, profile.span() > 0 ? profile.span() - 1 : std::size_t(0));
    }

    namespace detail
    {
        inline std::uint64_t snr_key(double ebn0_db) { return std::bit_cast<std::uint64_t>(ebn0_db); }

        struct TrialCount
        {
            std::uint64_t errors = 0, bits = 0;
        };

        // Payload bits of one block and the bits fed to the mapper.
        struct BlockBits
        {
            Bits info;
            Bits mapped;
        };

        inline std::size_t mapped_bits(const FbmcConfig &c)
        {
            return bits_per_symbol(c.modulation) * c.n_subcarriers * c.n_tx * c.block_len;
        }

        inline BlockBits draw_bits(const FbmcConfig &c, bool coded, const std::vector<std::size_t> &perm, std::uint64_t seed)
        {
            Rng rng(seed);
            BlockBits b;
            const std::size_t total = mapped_bits(c);
            if (!coded)
            {
                b.info = rng.bits(total);
                b.mapped = b.info;
                return b;
            }
            b.info = rng.bits(ConvCode::info_length(total));
            Bits cw = ConvCode::encode(b.info);
            cw.resize(total, 0); // pad when the grid holds an odd number of bits
            b.mapped = interleave(cw, perm);
            return b;
        }

        inline std::uint64_t count_errors(const BlockBits &tx, const Bits &rx_mapped, bool coded,
                                          const std::vector<std::size_t> &perm)
        {
            Bits rx = rx_mapped;
            if (coded)
            {
                Bits cw = deinterleave(rx, perm);
                cw.resize(ConvCode::coded_length(tx.info.size()));
                rx = ConvCode::decode(cw);
            }
            std::uint64_t e = 0;
            for (std::size_t i = 0; i < tx.info.size(); ++i)
                e += (tx.info[i] ^ rx[i]) & 1u;
            return e;
        }

        template <typename TrialFn>
        BerPoint run_point(BerScheme scheme, double ebn0, const BerSettings &s, TrialFn &&trial)
        {
            BerPoint p;
            p.scheme = scheme;
            p.ebn0_db = ebn0;
            const std::size_t threads = worker_count(s.threads);
            const std::size_t batch = std::max<std::size_t>(1, s.batch);
            while ((p.bit_errors < s.min_errors || p.trials < s.min_trials) && p.trials < s.max_trials)
            {
                const std::size_t nb = std::min<std::size_t>(batch, s.max_trials - p.trials);
                std::vector<TrialCount> res(nb);
                const std::uint64_t base = p.trials;
                parallel_for(nb, threads, [&](std::size_t i)
                             { res[i] = trial(base + i); });
                for (const auto &r : res)
                {
                    p.bit_errors += r.errors;
                    p.bits += r.bits;
                }
                p.trials += nb;
            }
            p.converged = p.bit_errors >= s.min_errors;
            p.ber = p.bits ? double(p.bit_errors) / double(p.bits) : 0.0;
            std::tie(p.ci_low, p.ci_high) = wilson_interval(p.bit_errors, p.bits);
            return p;
        }

        inline void check_grid(const std::vector<double> &g)
        {
            if (g.empty())
                throw ConfigError("SNR grid is empty");
            for (std::size_t i = 1; i < g.size(); ++i)
                if (!(g[i] > g[i - 1]))
                    throw ConfigError("SNR grid must be strictly ascending");
        }
    }

    inline Truncation ber_truncation(BerScheme s, std::size_t k)
    {
        switch (s)
        {
        case BerScheme::use_it_all:
            return truncation_case(k, TruncationCase::use_it_all);
        case BerScheme::one_front:
            return truncation_case(k, TruncationCase::one_front);
        case BerScheme::same_length:
        case BerScheme::compensated:
            return truncation_case(k, TruncationCase::same_length);
        case BerScheme::ofdm:
            break;
        }
        return {};
    }

    // One FBMC block through channel, equalizer and (optionally) compensation.
    // Returns the uncompensated or compensated symbol estimates.
    inline SymbolGrid fbmc_block(const Transceiver &trx, const SymbolGrid &grid, const MimoChannel &ch, double noise_power,
                                 std::uint64_t noise_seed, const CompensationSet *set, CompensationMode mode)
    {
        const FbmcConfig &c = trx.config();
        const BranchGrid tx = split_oqam(grid);
        const TimeSignal rx = apply_channel(trx.transmit(tx), ch, noise_power, noise_seed);
        const auto eq = build_equalizer(ch.freq, noise_power, c.symbol_power, c.equalizer);
        const EqualizedGrid u = trx.receive(rx, eq);
        if (!set || mode == CompensationMode::off)
            return extract_symbols(u);
        BlockCompensationOptions o;
        o.mode = mode;
        o.modulation = c.modulation;
        o.symbol_power = c.symbol_power;
        o.truth = &tx;
        return compensate_block(u, *set, o);
    }

    inline std::vector<BerPoint> ber_curve(const LinkScenario &sc, BerScheme scheme, const BerSettings &s);

    // CP-OFDM with the same bits, channel draws, noise seeds and equalizer as the
    // FBMC runs. Noise is raised by (N + CP) / N so that Eb/N0 accounts for the
    // prefix energy.
    inline std::vector<BerPoint> ofdm_baseline(const LinkScenario &sc, const BerSettings &s)
    {
        detail::check_grid(s.ebn0_db);
        const FbmcConfig &c = sc.system;
        c.validate();
        c.validate_channel_span(sc.profile.span());
        const std::size_t n = c.n_subcarriers, mcount = c.block_len;
        const std::size_t cp = s.cp_len ? s.cp_len : default_cp_length(n, sc.profile);
        const std::size_t sym_len = n + cp;
        const auto perm = make_interleaver(detail::mapped_bits(c), derive_seed(c.seed, RngPurpose::interleaver, {}));
        const double rate = s.coded ? 0.5 : 1.0;
        std::vector<BerPoint> out;
        for (double ebn0 : s.ebn0_db)
        {
            const double sigma2 = noise_for_ebn0(ebn0, c.symbol_power, bits_per_symbol(c.modulation) * rate);
            const double sigma2_ofdm = sigma2 * double(sym_len) / double(n);
            auto trial = [&](std::uint64_t t)
            {
                const detail::BlockBits bits = detail::draw_bits(c, s.coded, perm, derive_seed(c.seed, RngPurpose::bits, {t}));
                const SymbolGrid grid = map_qam(bits.mapped, c.modulation, n, c.n_tx, mcount, c.symbol_power);
                const MimoChannel ch = draw_channel(sc.profile, c.n_tx, c.n_rx, n, derive_seed(c.seed, RngPurpose::channel, {t}));
                UnitaryDft dft(n);
                TimeSignal tx;
                for (std::size_t j = 0; j < c.n_tx; ++j)
                {
                    Eigen::VectorXcd x(ix(mcount * sym_len));
                    const Eigen::MatrixXcd s_j = grid.stream(j);
                    for (std::size_t m = 0; m < mcount; ++m)
                    {
                        const Eigen::VectorXcd body = dft.inverse(s_j.col(ix(m)));
                        x.segment(ix(m * sym_len), ix(cp)) = body.tail(ix(cp));
                        x.segment(ix(m * sym_len + cp), ix(n)) = body;
                    }
                    tx.streams.push_back(std::move(x));
                }
                const TimeSignal rx = apply_channel(tx, ch, sigma2_ofdm,
                                                    derive_seed(c.seed, RngPurpose::noise, {detail::snr_key(ebn0), t}));
                std::vector<Eigen::MatrixXcd> y(c.n_rx, Eigen::MatrixXcd(ix(n), ix(mcount)));
                for (std::size_t r = 0; r < c.n_rx; ++r)
                    for (std::size_t m = 0; m < mcount; ++m)
                        y[r].col(ix(m)) = dft.forward(rx.streams[r].segment(ix(m * sym_len + cp), ix(n)));
                const auto eq = build_equalizer(ch.freq, sigma2_ofdm, c.symbol_power, c.equalizer);
                const std::vector<Eigen::MatrixXcd> u = equalize(y, eq);
                SymbolGrid est(n, c.n_tx, mcount);
                for (std::size_t j = 0; j < c.n_tx; ++j)
                    est.set_stream(j, u[j]);
                detail::TrialCount tc;
                tc.errors = detail::count_errors(bits, demap_qam(est, c.modulation, c.symbol_power), s.coded, perm);
                tc.bits = bits.info.size();
                return tc;
            };
            BerPoint p = detail::run_point(BerScheme::ofdm, ebn0, s, trial);
            if (sc.profile.span() > 0 && cp + 1 < sc.profile.span())
                p.note = "cyclic prefix shorter than the channel delay spread";
            if (s.progress)
                s.progress(p);
            out.push_back(std::move(p));
        }
        return out;
    }

    inline std::vector<BerPoint> ber_curve(const LinkScenario &sc, BerScheme scheme, const BerSettings &s)
    {
        if (scheme == BerScheme::ofdm)
            return ofdm_baseline(sc, s);
        detail::check_grid(s.ebn0_db);
        FbmcConfig c = sc.system;
        c.cut = ber_truncation(scheme, c.overlap);
        c.validate();
        c.validate_channel_span(sc.profile.span());
        const Transceiver trx(c, sc.filter);
        const std::size_t n = c.n_subcarriers, mcount = c.block_len;
        const auto perm = make_interleaver(detail::mapped_bits(c), derive_seed(c.seed, RngPurpose::interleaver, {}));
        const double rate = s.coded ? 0.5 : 1.0;
        std::vector<BerPoint> out;
        for (double ebn0 : s.ebn0_db)
        {
            const double sigma2 = noise_for_ebn0(ebn0, c.symbol_power, bits_per_symbol(c.modulation) * rate);
            std::optional<CompensationSet> set;
            if (scheme == BerScheme::compensated)
            {
                CompensationOptions o;
                o.model = s.kernel_model;
                o.solver = s.solver;
                o.regularization = sigma2 / c.symbol_power;
                set = CompensationSet::build(sc.filter, c.block_len, c.cut, o);
            }
            auto trial = [&](std::uint64_t t)
            {
                const detail::BlockBits bits = detail::draw_bits(c, s.coded, perm, derive_seed(c.seed, RngPurpose::bits, {t}));
                const SymbolGrid grid = map_qam(bits.mapped, c.modulation, n, c.n_tx, mcount, c.symbol_power);
                const MimoChannel ch = draw_channel(sc.profile, c.n_tx, c.n_rx, n, derive_seed(c.seed, RngPurpose::channel, {t}));
                const SymbolGrid est = fbmc_block(trx, grid, ch, sigma2, derive_seed(c.seed, RngPurpose::noise, {detail::snr_key(ebn0), t}),
                                                  set ? &*set : nullptr, s.compensation);
                detail::TrialCount tc;
                tc.errors = detail::count_errors(bits, demap_qam(est, c.modulation, c.symbol_power), s.coded, perm);
                tc.bits = bits.info.size();
                return tc;
            };
            BerPoint p = detail::run_point(scheme, ebn0, s, trial);
            if (s.progress)
                s.progress(p);
            out.push_back(std::move(p));
        }
        return out;
    }

    // Eb/N0 at which a BER curve crosses `target`, by linear interpolation of
    // log10(BER) between the bracketing points. nullopt when the curve does not
    // cross inside the grid.
    inline std::optional<double> crossing_ebn0(const std::vector<BerPoint> &curve, double target)
    {
        for (std::size_t i = 1; i < curve.size(); ++i)
        {
            const BerPoint &a = curve[i - 1], &b = curve[i];
            if (a.ber >= target && b.ber < target)
            {
                if (b.ber <= 0.0)
                    return b.ebn0_db;
                const double la = std::log10(a.ber), lb = std::log10(b.ber), lt = std::log10(target);
                return a.ebn0_db + (la - lt) / (la - lb) * (b.ebn0_db - a.ebn0_db);
            }
        }
        return std::nullopt;
    }
}

#endif
