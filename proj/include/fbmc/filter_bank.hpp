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

#ifndef fbmc_filter_bank_H
#define fbmc_filter_bank_H

#include "fbmc/dft.hpp"
#include "fbmc/prototype_filter.hpp"

#include <array>
#include <optional>

namespace fbmc
{
    inline void check_truncation(std::size_t k, const Truncation &cut)
    {
        if (cut.total() > k - 1)
            throw ConfigError("truncation (" + std::to_string(cut.front) + ", " + std::to_string(cut.rear) +
                              ") removes more than K - 1 = " + std::to_string(k - 1) + " symbols");
    }

    // Banded block-Toeplitz synthesis matrix of one branch. Block (r, c) is
    // diag(W_{r - c + i_F}) inside the band and zero elsewhere. Blocks are never
    // materialized; a block column vector is stored as the columns of an N x M
    // matrix and a block row vector as the columns of an N x rows matrix.
    class SynthesisMatrix
    {
    public:
        SynthesisMatrix() = default;

        SynthesisMatrix(const PrototypeFilter &f, Branch b, std::size_t block_len, Truncation cut)
            : slices_(f.slices(b)), n_(f.subcarriers()), k_(f.overlap()), m_(block_len), cut_(cut)
        {
            if (block_len < 1)
                throw ConfigError("synthesis matrix needs at least one symbol");
            check_truncation(k_, cut_);
        }

        std::size_t subcarriers() const { return n_; }
        std::size_t overlap() const { return k_; }
        std::size_t block_cols() const { return m_; }
        std::size_t block_rows() const { return k_ + m_ - 1 - cut_.total(); }
        std::size_t rows() const { return block_rows() * n_; }
        std::size_t cols() const { return m_ * n_; }
        const Truncation &truncation() const { return cut_; }

        // Index k of the slice at block (r, c), if inside the band.
        std::optional<std::size_t> slice_index(std::size_t r, std::size_t c) const
        {
            const std::ptrdiff_t k = std::ptrdiff_t(r + cut_.front) - std::ptrdiff_t(c);
            if (k < 0 || k >= std::ptrdiff_t(k_))
                return std::nullopt;
            return std::size_t(k);
        }

        const Eigen::VectorXd &slice(std::size_t k) const { return slices_.at(k); }

        // y = P b, b given as N x M, result N x rows
        template <typename Derived>
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply(const Eigen::MatrixBase<Derived> &b) const
        {
            using Scalar = typename Derived::Scalar;
            if (std::size_t(b.rows()) != n_ || std::size_t(b.cols()) != m_)
                throw ShapeError("SynthesisMatrix::apply: expected " + std::to_string(n_) + "x" + std::to_string(m_) +
                                 " input, got " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
            const std::size_t rows_ = block_rows();
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y =
                Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(ix(n_), ix(rows_));
            for (std::size_t r = 0; r < rows_; ++r)
            {
                const std::size_t orig = r + cut_.front;
                const std::size_t c_lo = orig >= k_ - 1 ? orig - (k_ - 1) : 0;
                const std::size_t c_hi = std::min(m_ - 1, orig);
                for (std::size_t c = c_lo; c <= c_hi; ++c)
                    y.col(ix(r)).array() += slices_[orig - c].array().template cast<Scalar>() * b.col(ix(c)).array();
            }
            return y;
        }

        // b = P^T x, x given as N x rows, result N x M
        template <typename Derived>
        Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> apply_transpose(const Eigen::MatrixBase<Derived> &x) const
        {
            using Scalar = typename Derived::Scalar;
            const std::size_t rows_ = block_rows();
            if (std::size_t(x.rows()) != n_ || std::size_t(x.cols()) != rows_)
                throw ShapeError("SynthesisMatrix::apply_transpose: expected " + std::to_string(n_) + "x" +
                                 std::to_string(rows_) + " input, got " + std::to_string(x.rows()) + "x" +
                                 std::to_string(x.cols()));
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> b =
                Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(ix(n_), ix(m_));
            for (std::size_t c = 0; c < m_; ++c)
                for (std::size_t k = 0; k < k_; ++k)
                {
                    const std::size_t orig = c + k;
                    if (orig < cut_.front || orig - cut_.front >= rows_)
                        continue;
                    b.col(ix(c)).array() += slices_[k].array().template cast<Scalar>() * x.col(ix(orig - cut_.front)).array();
                }
            return b;
        }

    private:
        std::vector<Eigen::VectorXd> slices_;
        std::size_t n_ = 0, k_ = 0, m_ = 0;
        Truncation cut_{};
    };

    inline SynthesisMatrix build_synthesis(const PrototypeFilter &f, Branch b, std::size_t block_len, Truncation cut)
    {
        return SynthesisMatrix(f, b, block_len, cut);
    }

    // M x M grid of diagonal N x N blocks, nonzero only for |m - i| < K.
    // Each block is stored as its diagonal.
    class BlockBandMatrix
    {
    public:
        BlockBandMatrix() = default;
        BlockBandMatrix(std::size_t n, std::size_t m, std::size_t k)
            : n_(n), m_(m), k_(k), blocks_(m * (2 * k - 1), Eigen::VectorXd::Zero(ix(n))) {}

        std::size_t subcarriers() const { return n_; }
        std::size_t block_count() const { return m_; }
        std::size_t overlap() const { return k_; }

        bool in_band(std::size_t m, std::size_t i) const
        {
            return (m > i ? m - i : i - m) < k_;
        }

        // diagonal of block (m, i); zero vector outside the band
        Eigen::VectorXd block(std::size_t m, std::size_t i) const
        {
            if (m >= m_ || i >= m_)
                throw ShapeError("BlockBandMatrix: block index out of range");
            if (!in_band(m, i))
                return Eigen::VectorXd::Zero(ix(n_));
            return blocks_[index(m, i)];
        }

        Eigen::VectorXd &band_block(std::size_t m, std::size_t i) { return blocks_.at(index(m, i)); }
        const Eigen::VectorXd &band_block(std::size_t m, std::size_t i) const { return blocks_.at(index(m, i)); }

        Eigen::MatrixXd dense() const
        {
            Eigen::MatrixXd d = Eigen::MatrixXd::Zero(ix(n_ * m_), ix(n_ * m_));
            for (std::size_t m = 0; m < m_; ++m)
                for (std::size_t i = 0; i < m_; ++i)
                    if (in_band(m, i))
                        d.block(ix(m * n_), ix(i * n_), ix(n_), ix(n_)).diagonal() = blocks_[index(m, i)];
            return d;
        }

        double max_abs() const
        {
            double v = 0.0;
            for (const auto &b : blocks_)
                v = std::max(v, b.cwiseAbs().maxCoeff());
            return v;
        }

        BlockBandMatrix operator-(const BlockBandMatrix &o) const
        {
            BlockBandMatrix r = *this;
            for (std::size_t q = 0; q < blocks_.size(); ++q)
                r.blocks_[q] -= o.blocks_.at(q);
            return r;
        }

        BlockBandMatrix operator+(const BlockBandMatrix &o) const
        {
            BlockBandMatrix r = *this;
            for (std::size_t q = 0; q < blocks_.size(); ++q)
                r.blocks_[q] += o.blocks_.at(q);
            return r;
        }

    private:
        std::size_t index(std::size_t m, std::size_t i) const
        {
            if (m >= m_ || i >= m_ || !in_band(m, i))
                throw ShapeError("BlockBandMatrix: block (" + std::to_string(m) + ", " + std::to_string(i) + ") outside band");
            return m * (2 * k_ - 1) + (i + k_ - 1 - m);
        }

        std::size_t n_ = 0, m_ = 0, k_ = 0;
        std::vector<Eigen::VectorXd> blocks_;
    };

    // G = P_a^T P_b, built slice-wise.
    inline BlockBandMatrix correlations(const SynthesisMatrix &a, const SynthesisMatrix &b)
    {
        if (a.subcarriers() != b.subcarriers() || a.block_cols() != b.block_cols() || a.overlap() != b.overlap() ||
            !(a.truncation() == b.truncation()))
            throw ShapeError("correlations: synthesis matrices differ in shape or truncation");
        const std::size_t n = a.subcarriers(), m_count = a.block_cols(), k = a.overlap();
        BlockBandMatrix g(n, m_count, k);
        for (std::size_t r = 0; r < a.block_rows(); ++r)
            for (std::size_t m = 0; m < m_count; ++m)
            {
                const auto ka = a.slice_index(r, m);
                if (!ka)
                    continue;
                for (std::size_t i = 0; i < m_count; ++i)
                {
                    const auto kb = b.slice_index(r, i);
                    if (kb)
                        g.band_block(m, i) += a.slice(*ka).cwiseProduct(b.slice(*kb));
                }
            }
        return g;
    }

    struct BranchPair
    {
        Branch row = Branch::in_phase; // P_row^T ...
        Branch col = Branch::in_phase; // ... P_col
        std::size_t index() const { return 2 * std::size_t(row) + std::size_t(col); }
    };

    inline constexpr std::array<BranchPair, 4> all_branch_pairs()
    {
        return {BranchPair{Branch::in_phase, Branch::in_phase}, BranchPair{Branch::in_phase, Branch::quadrature},
                BranchPair{Branch::quadrature, Branch::in_phase}, BranchPair{Branch::quadrature, Branch::quadrature}};
    }

    // Slice products removed by truncation: sum over the discarded original block
    // rows (the first i_F and the last i_R) of W_{r-m} W_{r-i}.
    inline BlockBandMatrix delta_blocks(const PrototypeFilter &f, std::size_t block_len, Truncation cut, BranchPair pair)
    {
        const std::size_t n = f.subcarriers(), k = f.overlap();
        check_truncation(k, cut);
        const std::size_t total_rows = k + block_len - 1;
        BlockBandMatrix d(n, block_len, k);
        auto add_row = [&](std::size_t r)
        {
            for (std::size_t m = 0; m < block_len; ++m)
            {
                if (r < m || r - m >= k)
                    continue;
                for (std::size_t i = 0; i < block_len; ++i)
                {
                    if (r < i || r - i >= k)
                        continue;
                    d.band_block(m, i) += f.slice(pair.row, r - m).cwiseProduct(f.slice(pair.col, r - i));
                }
            }
        };
        for (std::size_t r = 0; r < cut.front; ++r)
            add_row(r);
        for (std::size_t r = total_rows - cut.rear; r < total_rows; ++r)
            add_row(r);
        return d;
    }

    // The four correlation matrices of a scenario, untruncated and truncated,
    // with the truncation error Delta G = G_orig - G_trunc.
    struct CorrelationSet
    {
        std::array<BlockBandMatrix, 4> truncated;
        std::array<BlockBandMatrix, 4> original;
        std::array<BlockBandMatrix, 4> delta;

        const BlockBandMatrix &trunc(BranchPair p) const { return truncated[p.index()]; }
        const BlockBandMatrix &orig(BranchPair p) const { return original[p.index()]; }
        const BlockBandMatrix &diff(BranchPair p) const { return delta[p.index()]; }

        static CorrelationSet build(const PrototypeFilter &f, std::size_t block_len, Truncation cut)
        {
            CorrelationSet s;
            const std::array<SynthesisMatrix, 2> pt{SynthesisMatrix(f, Branch::in_phase, block_len, cut),
                                                    SynthesisMatrix(f, Branch::quadrature, block_len, cut)};
            const std::array<SynthesisMatrix, 2> po{SynthesisMatrix(f, Branch::in_phase, block_len, {}),
                                                    SynthesisMatrix(f, Branch::quadrature, block_len, {})};
            for (const BranchPair p : all_branch_pairs())
            {
                s.truncated[p.index()] = correlations(pt[int(p.row)], pt[int(p.col)]);
                s.original[p.index()] = correlations(po[int(p.row)], po[int(p.col)]);
                s.delta[p.index()] = delta_blocks(f, block_len, cut, p);
            }
            return s;
        }
    };

    // Q = Phi_m^H F diag(g) F^H Phi'_i. The receiver demodulates both branches
    // with the I-branch phase, so the row phase is always Phi_m; the column phase
    // carries the extra j of a Q-branch source. F diag(g) F^H is circulant with
    // first column fft(g) / N.
    inline Eigen::MatrixXcd interference_kernel(const Eigen::VectorXd &g, std::size_t m, std::size_t i, Branch col,
                                                UnitaryDft &dft)
    {
        const std::size_t n = std::size_t(g.size());
        if (dft.size() != n)
            throw ShapeError("interference_kernel: DFT size mismatch");
        const Eigen::VectorXcd c = dft.forward(Eigen::VectorXcd(g.cast<cplx>())) / std::sqrt(double(n));
        Eigen::MatrixXcd q(ix(n), ix(n));
        for (std::size_t qq = 0; qq < n; ++qq)
        {
            const cplx pc = oqam_phase(qq, i, col);
            for (std::size_t p = 0; p < n; ++p)
                q(ix(p), ix(qq)) = std::conj(oqam_phase(p, m)) * c[ix((p + n - qq) % n)] * pc;
        }
        return q;
    }

    inline Eigen::MatrixXcd interference_kernel(const Eigen::VectorXd &g, std::size_t m, std::size_t i, Branch col)
    {
        UnitaryDft dft(std::size_t(g.size()));
        return interference_kernel(g, m, i, col, dft);
    }

    // Real-valued response of the output branch: Re for I rows, Im for Q rows.
    inline Eigen::MatrixXd extract_branch(const Eigen::MatrixXcd &q, Branch row)
    {
        return row == Branch::in_phase ? Eigen::MatrixXd(q.real()) : Eigen::MatrixXd(q.imag());
    }

    // Real response of output (row, m) to input (col, i) for a correlation set G.
    inline Eigen::MatrixXd branch_response(const BlockBandMatrix &g, BranchPair pair, std::size_t m, std::size_t i,
                                           UnitaryDft &dft)
    {
        if (!g.in_band(m, i))
            return Eigen::MatrixXd::Zero(ix(g.subcarriers()), ix(g.subcarriers()));
        return extract_branch(interference_kernel(g.band_block(m, i), m, i, pair.col, dft), pair.row);
    }
}

#endif
