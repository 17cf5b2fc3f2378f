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

#ifndef fbmc_transceiver_H
#define fbmc_transceiver_H

#include "fbmc/channel.hpp"
#include "fbmc/filter_bank.hpp"

namespace fbmc
{
    // Per-stream N x M matrices, column m holding the length-N vector of symbol m.
    struct BranchPairSignal
    {
        std::vector<Eigen::MatrixXcd> in_phase;
        std::vector<Eigen::MatrixXcd> quadrature;

        const Eigen::MatrixXcd &branch(Branch b, std::size_t j) const { return b == Branch::in_phase ? in_phase.at(j) : quadrature.at(j); }
        Eigen::MatrixXcd &branch(Branch b, std::size_t j) { return b == Branch::in_phase ? in_phase.at(j) : quadrature.at(j); }
        std::size_t streams() const { return in_phase.size(); }
    };

    // Matched-filter outputs x-bar / x-tilde, one entry per receive antenna.
    using MatchedOutput = BranchPairSignal;

    // Equalized u-bar_m / u-tilde_m, one entry per transmit stream.
    using EqualizedGrid = BranchPairSignal;

    // y_m = Phi_m^H F x_m. Both branches are demodulated with the I-branch phase;
    // the Q-branch symbol then appears on the imaginary axis.
    inline Eigen::VectorXcd demod(const Eigen::VectorXcd &x, std::size_t m, UnitaryDft &dft)
    {
        Eigen::VectorXcd y = dft.forward(x);
        for (Eigen::Index n = 0; n < y.size(); ++n)
            y[n] *= std::conj(oqam_phase(std::size_t(n), m));
        return y;
    }

    // Inverse of demod for a given branch: F^H Phi'_m a.
    inline Eigen::VectorXcd modulate(const Eigen::VectorXd &s, std::size_t m, Branch b, UnitaryDft &dft)
    {
        Eigen::VectorXcd a(s.size());
        for (Eigen::Index n = 0; n < s.size(); ++n)
            a[n] = oqam_phase(std::size_t(n), m, b) * s[n];
        return dft.inverse(a);
    }

    // E_n = (C_n^H C_n + nu sigma^2 / delta^2 I)^-1 C_n^H, the left form of
    // C^H (C C^H + ...)^-1 that also covers n_rx > n_tx under ZF.
    inline std::vector<Eigen::MatrixXcd> build_equalizer(const std::vector<Eigen::MatrixXcd> &c, double noise_power,
                                                         double symbol_power, EqualizerKind kind)
    {
        std::vector<Eigen::MatrixXcd> e;
        e.reserve(c.size());
        const double lambda = kind == EqualizerKind::mmse ? noise_power / symbol_power : 0.0;
        for (std::size_t n = 0; n < c.size(); ++n)
        {
            const Eigen::MatrixXcd &cn = c[n];
            if (kind == EqualizerKind::zf || lambda == 0.0)
            {
                Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cn);
                const auto &sv = svd.singularValues();
                if (sv.size() == 0 || sv[0] == 0.0 || sv[sv.size() - 1] < 1e-12 * sv[0] ||
                    std::size_t(sv.size()) < std::size_t(cn.cols()))
                    throw SingularityError("zero-forcing equalizer: channel matrix on subcarrier " + std::to_string(n) +
                                               " is singular",
                                           n);
            }
            const Eigen::MatrixXcd gram = cn.adjoint() * cn + lambda * Eigen::MatrixXcd::Identity(cn.cols(), cn.cols());
            e.push_back(gram.partialPivLu().solve(cn.adjoint()));
        }
        return e;
    }

    // u_m[:, n] = E_n y_m[:, n] for every subcarrier. y holds one N x M matrix per
    // receive antenna, the result one per transmit stream.
    inline std::vector<Eigen::MatrixXcd> equalize(const std::vector<Eigen::MatrixXcd> &y, const std::vector<Eigen::MatrixXcd> &e)
    {
        if (y.empty() || e.empty())
            throw ShapeError("equalize: empty input");
        const Eigen::Index n = y.front().rows(), m = y.front().cols();
        if (std::size_t(n) != e.size())
            throw ShapeError("equalize: " + std::to_string(e.size()) + " equalizer matrices for " + std::to_string(n) + " subcarriers");
        const Eigen::Index nt = e.front().rows(), nr = e.front().cols();
        if (std::size_t(nr) != y.size())
            throw ShapeError("equalize: equalizer expects " + std::to_string(nr) + " receive streams, got " + std::to_string(y.size()));
        std::vector<Eigen::MatrixXcd> u(std::size_t(nt), Eigen::MatrixXcd::Zero(n, m));
        Eigen::VectorXcd yv(nr);
        for (Eigen::Index k = 0; k < n; ++k)
            for (Eigen::Index c = 0; c < m; ++c)
            {
                for (Eigen::Index r = 0; r < nr; ++r)
                    yv[r] = y[std::size_t(r)](k, c);
                const Eigen::VectorXcd uv = e[std::size_t(k)] * yv;
                for (Eigen::Index t = 0; t < nt; ++t)
                    u[std::size_t(t)](k, c) = uv[t];
            }
        return u;
    }

    // One scenario's transmit and receive chains. Immutable after construction.
    class Transceiver
    {
    public:
        Transceiver(const FbmcConfig &cfg, PrototypeFilter f) : cfg_(cfg), filter_(std::move(f))
        {
            cfg_.validate();
            if (filter_.subcarriers() != cfg_.n_subcarriers || filter_.overlap() != cfg_.overlap)
                throw ConfigError("prototype filter (N=" + std::to_string(filter_.subcarriers()) + ", K=" +
                                  std::to_string(filter_.overlap()) + ") does not match the configuration");
            p_[0] = SynthesisMatrix(filter_, Branch::in_phase, cfg_.block_len, cfg_.cut);
            p_[1] = SynthesisMatrix(filter_, Branch::quadrature, cfg_.block_len, cfg_.cut);
        }

        const FbmcConfig &config() const { return cfg_; }
        const PrototypeFilter &filter() const { return filter_; }
        const SynthesisMatrix &synthesis(Branch b) const { return p_[int(b)]; }
        std::size_t signal_length() const { return p_[0].rows(); }

        TimeSignal transmit(const BranchGrid &grid) const
        {
            const std::size_t n = cfg_.n_subcarriers, mcount = cfg_.block_len;
            if (grid.n_subcarriers != n || grid.n_streams != cfg_.n_tx || grid.block_len() != mcount ||
                std::size_t(grid.real_part.rows()) != n * cfg_.n_tx || grid.imag_part.rows() != grid.real_part.rows() ||
                grid.imag_part.cols() != grid.real_part.cols())
                throw ShapeError("transmit: symbol grid shape does not match the configuration");
            UnitaryDft dft(n);
            TimeSignal out;
            for (std::size_t j = 0; j < cfg_.n_tx; ++j)
            {
                Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(ix(n), ix(p_[0].block_rows()));
                for (Branch b : {Branch::in_phase, Branch::quadrature})
                {
                    const Eigen::MatrixXd s = grid.stream(b, j);
                    Eigen::MatrixXcd a(ix(n), ix(mcount));
                    for (std::size_t m = 0; m < mcount; ++m)
                        a.col(ix(m)) = modulate(s.col(ix(m)), m, b, dft);
                    o += p_[int(b)].apply(a);
                }
                out.streams.emplace_back(Eigen::Map<const Eigen::VectorXcd>(o.data(), o.size()));
            }
            return out;
        }

        MatchedOutput receive_front(const TimeSignal &r) const
        {
            const std::size_t n = cfg_.n_subcarriers, rows = p_[0].block_rows();
            MatchedOutput x;
            for (const auto &s : r.streams)
            {
                if (std::size_t(s.size()) != n * rows)
                    throw ShapeError("receive_front: stream of " + std::to_string(s.size()) + " samples, expected " +
                                     std::to_string(n * rows));
                const Eigen::Map<const Eigen::MatrixXcd> blk(s.data(), ix(n), ix(rows));
                x.in_phase.push_back(p_[0].apply_transpose(blk));
                x.quadrature.push_back(p_[1].apply_transpose(blk));
            }
            return x;
        }

        // Segment-wise demodulation of matched-filter outputs.
        BranchPairSignal demodulate(const MatchedOutput &x) const
        {
            UnitaryDft dft(cfg_.n_subcarriers);
            BranchPairSignal y;
            for (Branch b : {Branch::in_phase, Branch::quadrature})
                for (std::size_t r = 0; r < x.streams(); ++r)
                {
                    const Eigen::MatrixXcd &src = x.branch(b, r);
                    Eigen::MatrixXcd dst(src.rows(), src.cols());
                    for (Eigen::Index m = 0; m < src.cols(); ++m)
                        dst.col(m) = demod(src.col(m), std::size_t(m), dft);
                    (b == Branch::in_phase ? y.in_phase : y.quadrature).push_back(std::move(dst));
                }
            return y;
        }

        EqualizedGrid receive(const TimeSignal &r, const std::vector<Eigen::MatrixXcd> &eq) const
        {
            const BranchPairSignal y = demodulate(receive_front(r));
            EqualizedGrid u;
            u.in_phase = equalize(y.in_phase, eq);
            u.quadrature = equalize(y.quadrature, eq);
            return u;
        }

    private:
        FbmcConfig cfg_;
        PrototypeFilter filter_;
        std::array<SynthesisMatrix, 2> p_;
    };

    // Uncompensated symbol estimates: Re{u-bar} + j Im{u-tilde}.
    inline SymbolGrid extract_symbols(const EqualizedGrid &u)
    {
        const std::size_t n = std::size_t(u.in_phase.front().rows()), mcount = std::size_t(u.in_phase.front().cols());
        SymbolGrid g(n, u.streams(), mcount);
        for (std::size_t j = 0; j < u.streams(); ++j)
            g.set_stream(j, u.in_phase[j].real().cast<cplx>() + cplx(0.0, 1.0) * u.quadrature[j].imag().cast<cplx>());
        return g;
    }
}

#endif
