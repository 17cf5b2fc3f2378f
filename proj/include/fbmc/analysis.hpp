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

#ifndef fbmc_analysis_H
#define fbmc_analysis_H

#include "fbmc/compensation.hpp"

namespace fbmc
{
    inline double to_db(double p)
    {
        return p > 0.0 ? std::max(10.0 * std::log10(p), -120.0) : -120.0;
    }

    enum class TruncationCase
    {
        use_it_all,
        one_front_and_end,
        one_front,
        one_end,
        same_length,
    };

    inline TruncationCase parse_truncation_case(std::string_view s)
    {
        const std::string v = lowercase(s);
        if (v == "use_it_all")
            return TruncationCase::use_it_all;
        if (v == "one_front_and_end")
            return TruncationCase::one_front_and_end;
        if (v == "one_front")
            return TruncationCase::one_front;
        if (v == "one_end")
            return TruncationCase::one_end;
        if (v == "same_length")
            return TruncationCase::same_length;
        throw ConfigError("unknown truncation case '" + std::string(s) +
                          "' (expected use_it_all, one_front_and_end, one_front, one_end or same_length)");
    }

    inline std::string to_string(TruncationCase c)
    {
        switch (c)
        {
        case TruncationCase::use_it_all:
            return "use_it_all";
        case TruncationCase::one_front_and_end:
            return "one_front_and_end";
        case TruncationCase::one_front:
            return "one_front";
        case TruncationCase::one_end:
            return "one_end";
        case TruncationCase::same_length:
            return "same_length";
        }
        return "?";
    }

    // Same length keeps M output symbols by cutting t = floor(K/2) in front and
    // K - 1 - t at the rear. The other cases keep one extra symbol at the front
    // and/or the rear. For K = 6 this gives (0,0), (2,1), (2,2), (3,1), (3,2).
    inline Truncation truncation_case(std::size_t k, TruncationCase c)
    {
        if (k < 2)
            throw ConfigError("truncation_case: K must be at least 2");
        const std::size_t t = k / 2, rear = k - 1 - t;
        auto dec = [](std::size_t v)
        { return v > 0 ? v - 1 : 0; };
        switch (c)
        {
        case TruncationCase::use_it_all:
            return {0, 0};
        case TruncationCase::one_front_and_end:
            return {dec(t), dec(rear)};
        case TruncationCase::one_front:
            return {dec(t), rear};
        case TruncationCase::one_end:
            return {t, dec(rear)};
        case TruncationCase::same_length:
            return {t, rear};
        }
        return {};
    }

    inline Truncation truncation_case(std::size_t k, std::string_view name) { return truncation_case(k, parse_truncation_case(name)); }

    // ---------------------------------------------------------------------
    // Deterministic response of the flat-channel chain. Row block (b, m) maps all
    // 2 M N real input symbols to the N real outputs ext_b(u_{b,m}).

    class ResponseModel
    {
    public:
        ResponseModel(const PrototypeFilter &f, std::size_t block_len, Truncation cut)
            : n_(f.subcarriers()), m_(block_len), k_(f.overlap()), cut_(cut), corr_(CorrelationSet::build(f, block_len, cut)) {}

        std::size_t subcarriers() const { return n_; }
        std::size_t block_len() const { return m_; }
        const CorrelationSet &correlations() const { return corr_; }

        std::size_t column(Branch b, std::size_t i) const { return (std::size_t(b) * m_ + i) * n_; }

        // N x 2MN real response of output (b, m)
        Eigen::MatrixXd row(Branch b, std::size_t m, UnitaryDft &dft) const
        {
            Eigen::MatrixXd r = Eigen::MatrixXd::Zero(ix(n_), ix(2 * m_ * n_));
            for (Branch bc : {Branch::in_phase, Branch::quadrature})
            {
                const BranchPair p{b, bc};
                const BlockBandMatrix &g = corr_.trunc(p);
                for (std::size_t i = 0; i < m_; ++i)
                    if (g.in_band(m, i))
                        r.middleCols(ix(column(bc, i)), ix(n_)) = branch_response(g, p, m, i, dft);
            }
            return r;
        }

        // Real noise covariance of ext_b(u_{b,m}) for unit complex noise variance
        Eigen::MatrixXd noise_covariance(Branch b, std::size_t m, UnitaryDft &dft) const
        {
            const BlockBandMatrix &g = corr_.trunc({b, b});
            return 0.5 * Eigen::MatrixXd(interference_kernel(g.band_block(m, m), m, m, Branch::in_phase, dft).real());
        }

        // Row after genie compensation: S (R - sum of cross corrections)
        Eigen::MatrixXd compensated_row(Branch b, std::size_t m, const CompensationSet &set, UnitaryDft &dft) const
        {
            Eigen::MatrixXd r = row(b, m, dft);
            if (set.is_identity())
                return r;
            for (Branch bc : {Branch::in_phase, Branch::quadrature})
                for (std::size_t i = 0; i < m_; ++i)
                    if (const Eigen::MatrixXd *d = set.cross(b, m, bc, i))
                        r.middleCols(ix(column(bc, i)), ix(n_)) -= *d;
            return set.solver(b, m) * r;
        }

        // Full 2MN x 2MN real system, rows ordered like the columns
        Eigen::MatrixXd system(UnitaryDft &dft) const
        {
            Eigen::MatrixXd t(ix(2 * m_ * n_), ix(2 * m_ * n_));
            for (Branch b : {Branch::in_phase, Branch::quadrature})
                for (std::size_t m = 0; m < m_; ++m)
                    t.middleRows(ix(column(b, m)), ix(n_)) = row(b, m, dft);
            return t;
        }

    private:
        std::size_t n_, m_, k_;
        Truncation cut_;
        CorrelationSet corr_;
    };

    struct SirRow
    {
        Branch branch = Branch::in_phase;
        std::size_t m = 0;
        double signal = 0.0;       // linear, unit symbol power
        double interference = 0.0; // linear
        double signal_db = 0.0;
        double interference_db = 0.0;
        double sir_db = 0.0;
    };

    struct SirReport
    {
        std::size_t n_subcarriers = 0, overlap = 0, block_len = 0;
        Truncation cut{};
        bool compensated = false;
        std::vector<SirRow> rows; // I branch m = 0..M-1, then Q branch

        const SirRow &at(Branch b, std::size_t m) const { return rows.at(std::size_t(b) * block_len + m); }

        const SirRow &worst() const
        {
            return *std::min_element(rows.begin(), rows.end(), [](const SirRow &a, const SirRow &b)
                                     { return a.sir_db < b.sir_db; });
        }
    };

    // Per-row power accounting of a response: desired power is the mean squared
    // diagonal of the self block, interference the remaining row energy.
    inline SirRow account_row(const Eigen::MatrixXd &r, Branch b, std::size_t m, std::size_t self_col)
    {
        const Eigen::Index n = r.rows();
        double sig = 0.0;
        for (Eigen::Index q = 0; q < n; ++q)
            sig += r(q, ix(self_col) + q) * r(q, ix(self_col) + q);
        sig /= double(n);
        const double total = r.squaredNorm() / double(n);
        SirRow row;
        row.branch = b;
        row.m = m;
        row.signal = sig;
        row.interference = std::max(total - sig, 0.0);
        row.signal_db = to_db(row.signal);
        row.interference_db = to_db(row.interference);
        row.sir_db = row.signal_db - row.interference_db;
        return row;
    }

    struct SirOptions
    {
        bool compensated = false;
        CompensationOptions compensation{};
    };

    inline SirReport sir_table(const PrototypeFilter &f, std::size_t block_len, Truncation cut, const SirOptions &opt = {})
    {
        const ResponseModel model(f, block_len, cut);
        CompensationSet set;
        if (opt.compensated)
            set = CompensationSet::build(f, block_len, cut, opt.compensation);
        UnitaryDft dft(f.subcarriers());
        SirReport rep;
        rep.n_subcarriers = f.subcarriers();
        rep.overlap = f.overlap();
        rep.block_len = block_len;
        rep.cut = cut;
        rep.compensated = opt.compensated;
        for (Branch b : {Branch::in_phase, Branch::quadrature})
            for (std::size_t m = 0; m < block_len; ++m)
            {
                const Eigen::MatrixXd r = opt.compensated ? model.compensated_row(b, m, set, dft) : model.row(b, m, dft);
                rep.rows.push_back(account_row(r, b, m, model.column(b, m)));
            }
        return rep;
    }

    inline SirReport sir_table(const PrototypeFilter &f, const FbmcConfig &cfg, bool compensated)
    {
        SirOptions o;
        o.compensated = compensated;
        return sir_table(f, cfg.block_len, cfg.cut, o);
    }

    // Response of one transmit stream measured by pushing unit symbols through the
    // complete chain (transmit, identity channel, matched filter, demod). Columns
    // follow ResponseModel::column. Used to check the kernel path end to end.
    inline Eigen::MatrixXd measure_response(const Transceiver &trx, std::size_t stream)
    {
        const FbmcConfig &cfg = trx.config();
        const std::size_t n = cfg.n_subcarriers, mcount = cfg.block_len, dim = 2 * mcount * n;
        const MimoChannel ch = identity_channel(cfg.n_tx, cfg.n_rx, n);
        const std::vector<Eigen::MatrixXcd> eq = build_equalizer(ch.freq, 0.0, cfg.symbol_power, EqualizerKind::zf);
        Eigen::MatrixXd t(ix(dim), ix(dim));
        BranchGrid g{Eigen::MatrixXd::Zero(ix(n * cfg.n_tx), ix(mcount)),
                     Eigen::MatrixXd::Zero(ix(n * cfg.n_tx), ix(mcount)), n, cfg.n_tx};
        for (std::size_t col = 0; col < dim; ++col)
        {
            const Branch b = col < mcount * n ? Branch::in_phase : Branch::quadrature;
            const std::size_t i = (col % (mcount * n)) / n, q = col % n;
            g.branch(b)(ix(q * cfg.n_tx + stream), ix(i)) = 1.0;
            const EqualizedGrid u = trx.receive(apply_channel(trx.transmit(g), ch, 0.0, 0), eq);
            g.branch(b)(ix(q * cfg.n_tx + stream), ix(i)) = 0.0;
            for (Branch br : {Branch::in_phase, Branch::quadrature})
                for (std::size_t m = 0; m < mcount; ++m)
                {
                    const Eigen::VectorXcd v = u.branch(br, stream).col(ix(m));
                    t.block(ix((std::size_t(br) * mcount + m) * n), ix(col), ix(n), 1) =
                        br == Branch::in_phase ? Eigen::VectorXd(v.real()) : Eigen::VectorXd(v.imag());
                }
        }
        return t;
    }

    // ---------------------------------------------------------------------
    // Spectral efficiency

    enum class SeScheme
    {
        use_it_all,
        one_front,
        compensate_all,
    };

    inline std::string to_string(SeScheme s)
    {
        switch (s)
        {
        case SeScheme::use_it_all:
            return "use_it_all";
        case SeScheme::one_front:
            return "one_front";
        case SeScheme::compensate_all:
            return "compensate_all";
        }
        return "?";
    }

    // Overhead symbols per block: K - 1 without truncation, 1 for the one-front
    // tail, none when every truncated symbol is compensated.
    inline std::size_t se_alpha(SeScheme s, std::size_t k)
    {
        switch (s)
        {
        case SeScheme::use_it_all:
            return k - 1;
        case SeScheme::one_front:
            return 1;
        case SeScheme::compensate_all:
            return 0;
        }
        return 0;
    }

    // Transmission efficiency of the untruncated block, M / (K + M - 1).
    inline double transmission_efficiency(std::size_t block_len, std::size_t k)
    {
        return double(block_len) / double(k + block_len - 1);
    }

    // Overhead relative to the payload, alpha / M.
    inline double payload_overhead(std::size_t alpha, std::size_t block_len) { return double(alpha) / double(block_len); }

    // Overhead relative to the transmitted length, alpha / (M + alpha).
    inline double length_overhead(std::size_t alpha, std::size_t block_len) { return double(alpha) / double(block_len + alpha); }

    // min(N_t, N_r) * M / (M + alpha) * mean_m log2(1 + SINR_m)
    inline double se_from_sinr(const std::vector<double> &sinr, std::size_t alpha, std::size_t streams)
    {
        if (sinr.empty())
            throw ShapeError("se_from_sinr: empty SINR table");
        const double mcount = double(sinr.size());
        double acc = 0.0;
        for (double s : sinr)
            acc += std::log2(1.0 + s);
        return double(streams) * (mcount / (mcount + double(alpha))) * (acc / mcount);
    }

    struct SeReport
    {
        SeScheme scheme = SeScheme::use_it_all;
        std::size_t alpha = 0;
        std::size_t block_len = 0;
        std::size_t overlap = 0;
        Truncation cut{};
        double ebn0_db = 0.0;
        double noise_power = 0.0;
        std::vector<double> sinr; // linear, per symbol index
        double se = 0.0;
        double eta = 0.0;             // M / (K + M - 1)
        double overhead_payload = 0.0; // alpha / M
        double overhead_length = 0.0;  // alpha / (M + alpha)
    };

    // Per-symbol SINR of a flat AWGN channel. A complex symbol index m combines
    // both branches: (S_I + S_Q) / (I_I + N_I + I_Q + N_Q). Compensation, when
    // enabled, uses the regularized solver with lambda = sigma^2 / delta^2.
    inline std::vector<double> sinr_table(const PrototypeFilter &f, std::size_t block_len, Truncation cut, bool compensated,
                                          double symbol_power, double noise_power,
                                          KernelModel kernel_model = KernelModel::truncation)
    {
        const ResponseModel model(f, block_len, cut);
        CompensationSet set;
        if (compensated)
        {
            CompensationOptions o;
            o.model = kernel_model;
            o.solver = CompensationSolver::mmse;
            o.regularization = noise_power / symbol_power;
            set = CompensationSet::build(f, block_len, cut, o);
        }
        UnitaryDft dft(f.subcarriers());
        std::vector<double> out(block_len);
        for (std::size_t m = 0; m < block_len; ++m)
        {
            double sig = 0.0, den = 0.0;
            for (Branch b : {Branch::in_phase, Branch::quadrature})
            {
                const Eigen::MatrixXd r = compensated ? model.compensated_row(b, m, set, dft) : model.row(b, m, dft);
                const SirRow acc = account_row(r, b, m, model.column(b, m));
                Eigen::MatrixXd c = model.noise_covariance(b, m, dft);
                if (compensated && !set.is_identity())
                    c = set.solver(b, m) * c * set.solver(b, m).transpose();
                const double noise = noise_power * c.trace() / double(f.subcarriers());
                sig += 0.5 * symbol_power * acc.signal;
                den += 0.5 * symbol_power * acc.interference + noise;
            }
            out[m] = den > 0.0 ? sig / den : std::numeric_limits<double>::infinity();
        }
        return out;
    }

    inline Truncation se_truncation(SeScheme s, std::size_t k)
    {
        switch (s)
        {
        case SeScheme::use_it_all:
            return truncation_case(k, TruncationCase::use_it_all);
        case SeScheme::one_front:
            return truncation_case(k, TruncationCase::one_front);
        case SeScheme::compensate_all:
            return truncation_case(k, TruncationCase::same_length);
        }
        return {};
    }

    // sigma^2 for a target Eb/N0 with the given bits per complex symbol.
    inline double noise_for_ebn0(double ebn0_db, double symbol_power, double bits_per_complex_symbol)
    {
        return symbol_power / (bits_per_complex_symbol * std::pow(10.0, ebn0_db / 10.0));
    }

    inline std::vector<SeReport> spectral_efficiency(const PrototypeFilter &f, const FbmcConfig &cfg,
                                                     const std::vector<double> &ebn0_db,
                                                     const std::vector<SeScheme> &schemes = {SeScheme::use_it_all, SeScheme::one_front, SeScheme::compensate_all})
    {
        std::vector<SeReport> out;
        const std::size_t streams = std::min(cfg.n_tx, cfg.n_rx);
        for (SeScheme s : schemes)
        {
            const Truncation cut = se_truncation(s, f.overlap());
            for (double e : ebn0_db)
            {
                SeReport r;
                r.scheme = s;
                r.alpha = se_alpha(s, f.overlap());
                r.block_len = cfg.block_len;
                r.overlap = f.overlap();
                r.cut = cut;
                r.ebn0_db = e;
                r.noise_power = noise_for_ebn0(e, cfg.symbol_power, double(bits_per_symbol(cfg.modulation)));
                r.sinr = sinr_table(f, cfg.block_len, cut, s == SeScheme::compensate_all, cfg.symbol_power, r.noise_power);
                r.se = se_from_sinr(r.sinr, r.alpha, streams);
                r.eta = transmission_efficiency(cfg.block_len, f.overlap());
                r.overhead_payload = payload_overhead(r.alpha, cfg.block_len);
                r.overhead_length = length_overhead(r.alpha, cfg.block_len);
                out.push_back(std::move(r));
            }
        }
        return out;
    }
}

#endif
