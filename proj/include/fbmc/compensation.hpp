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

#ifndef fbmc_compensation_H
#define fbmc_compensation_H

#include "fbmc/transceiver.hpp"

#include <optional>

namespace fbmc
{
    enum class CompensationMode
    {
        off,
        genie,
        decision_directed,
    };

    // Which deviation from the ideal response the compensator removes.
    //  truncation:   only the part caused by the discarded filter-output rows (Delta G)
    //  finite_length: the whole deviation of the truncated response from identity,
    //                including the finite-K residual of the untruncated filter
    enum class KernelModel
    {
        truncation,
        finite_length,
    };

    // How A_m is inverted. zf uses A^-1, mmse the Tikhonov form (A^T A + lambda I)^-1 A^T.
    enum class CompensationSolver
    {
        zf,
        mmse,
    };

    inline CompensationMode parse_compensation_mode(std::string_view s)
    {
        const std::string v = lowercase(s);
        if (v == "off" || v == "none")
            return CompensationMode::off;
        if (v == "genie")
            return CompensationMode::genie;
        if (v == "dd" || v == "decision_directed")
            return CompensationMode::decision_directed;
        throw ConfigError("unknown compensation mode '" + std::string(s) + "' (expected off, genie or dd)");
    }

    inline std::string to_string(CompensationMode m)
    {
        switch (m)
        {
        case CompensationMode::off:
            return "off";
        case CompensationMode::genie:
            return "genie";
        case CompensationMode::decision_directed:
            return "dd";
        }
        return "?";
    }

    inline KernelModel parse_kernel_model(std::string_view s)
    {
        const std::string v = lowercase(s);
        if (v == "truncation")
            return KernelModel::truncation;
        if (v == "finite_length")
            return KernelModel::finite_length;
        throw ConfigError("unknown kernel model '" + std::string(s) + "' (expected truncation or finite_length)");
    }

    inline std::string to_string(KernelModel k) { return k == KernelModel::truncation ? "truncation" : "finite_length"; }

    inline CompensationSolver parse_compensation_solver(std::string_view s)
    {
        const std::string v = lowercase(s);
        if (v == "zf")
            return CompensationSolver::zf;
        if (v == "mmse")
            return CompensationSolver::mmse;
        throw ConfigError("unknown compensation solver '" + std::string(s) + "' (expected zf or mmse)");
    }

    inline std::string to_string(CompensationSolver s) { return s == CompensationSolver::zf ? "zf" : "mmse"; }

    struct CompensationOptions
    {
        KernelModel model = KernelModel::truncation;
        CompensationSolver solver = CompensationSolver::zf;
        double regularization = 0.0; // lambda for the mmse solver
        double max_condition = 1e6;
    };

    struct SymbolRef
    {
        Branch branch = Branch::in_phase;
        std::size_t m = 0;
        friend bool operator==(const SymbolRef &, const SymbolRef &) = default;
    };

    // Even K: real m = 0 first, the other real symbols, then the imaginary ones.
    // Odd K: the same with the branches exchanged and symbol indices mirrored.
    inline std::vector<SymbolRef> default_schedule(std::size_t k, std::size_t block_len)
    {
        std::vector<SymbolRef> s;
        s.reserve(2 * block_len);
        if (k % 2 == 0)
        {
            for (std::size_t m = 0; m < block_len; ++m)
                s.push_back({Branch::in_phase, m});
            for (std::size_t m = 0; m < block_len; ++m)
                s.push_back({Branch::quadrature, m});
        }
        else
        {
            for (std::size_t m = block_len; m-- > 0;)
                s.push_back({Branch::quadrature, m});
            for (std::size_t m = block_len; m-- > 0;)
                s.push_back({Branch::in_phase, m});
        }
        return s;
    }

    // Self corrections A_m, their solve matrices and the cross-correction kernels
    // D for every output symbol of both branches. The compensated estimate of
    // symbol (b, m) is
    //   s_hat = S_{b,m} (ext_b(u_{b,m}) - sum_{(b',i) != (b,m)} D_{b,m,b',i} s_{b',i}),
    // with ext = Re on the I branch and Im on the Q branch, and S = A^-1 (zf).
    class CompensationSet
    {
    public:
        CompensationSet() = default;

        static CompensationSet build(const PrototypeFilter &f, std::size_t block_len, Truncation cut,
                                     const CompensationOptions &opt = {})
        {
            check_truncation(f.overlap(), cut);
            CompensationSet s;
            s.n_ = f.subcarriers();
            s.m_ = block_len;
            s.k_ = f.overlap();
            s.cut_ = cut;
            s.opt_ = opt;
            s.identity_ = cut.none() && opt.model == KernelModel::truncation;
            const std::size_t band = 2 * s.k_ - 1;
            s.cross_.assign(2 * block_len * 2 * band, Eigen::MatrixXd());
            s.self_.assign(2 * block_len, Eigen::MatrixXd::Identity(ix(s.n_), ix(s.n_)));
            s.solve_ = s.self_;
            s.cond_.assign(2 * block_len, 1.0);
            if (s.identity_)
                return s;

            const CorrelationSet corr = CorrelationSet::build(f, block_len, cut);
            UnitaryDft dft(s.n_);
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(ix(s.n_), ix(s.n_));
            for (const BranchPair p : all_branch_pairs())
            {
                const BlockBandMatrix &g = opt.model == KernelModel::truncation ? corr.diff(p) : corr.trunc(p);
                for (std::size_t m = 0; m < block_len; ++m)
                    for (std::size_t i = 0; i < block_len; ++i)
                    {
                        if (!g.in_band(m, i))
                            continue;
                        const Eigen::VectorXd &blk = g.band_block(m, i);
                        const bool self = p.row == p.col && m == i;
                        Eigen::MatrixXd d;
                        if (opt.model == KernelModel::truncation)
                        {
                            if (blk.cwiseAbs().maxCoeff() == 0.0)
                                continue;
                            d = -extract_branch(interference_kernel(blk, m, i, p.col, dft), p.row);
                        }
                        else
                        {
                            d = extract_branch(interference_kernel(blk, m, i, p.col, dft), p.row);
                            if (self)
                                d -= eye;
                        }
                        if (self)
                            s.self_[s.row_index(p.row, m)] = eye + d;
                        else
                            s.cross_[s.cross_index(p.row, m, p.col, i)] = std::move(d);
                    }
            }

            for (Branch b : {Branch::in_phase, Branch::quadrature})
                for (std::size_t m = 0; m < block_len; ++m)
                {
                    const std::size_t r = s.row_index(b, m);
                    const Eigen::MatrixXd &a = s.self_[r];
                    if (a == eye)
                        continue;
                    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
                    const auto &sv = svd.singularValues();
                    const double cond = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
                    s.cond_[r] = cond;
                    if (!(cond <= opt.max_condition))
                        throw ConditioningError("compensation: A for symbol " + std::to_string(m) + " of branch " +
                                                    to_string(b) + " has condition number " + std::to_string(cond),
                                                m, cond);
                    if (opt.solver == CompensationSolver::zf || opt.regularization <= 0.0)
                        s.solve_[r] = a.partialPivLu().inverse();
                    else
                        s.solve_[r] = (a.transpose() * a + opt.regularization * eye).ldlt().solve(a.transpose());
                }
            return s;
        }

        std::size_t subcarriers() const { return n_; }
        std::size_t block_len() const { return m_; }
        std::size_t overlap() const { return k_; }
        const Truncation &truncation() const { return cut_; }
        const CompensationOptions &options() const { return opt_; }
        bool is_identity() const { return identity_; }

        const Eigen::MatrixXd &self(Branch b, std::size_t m) const { return self_.at(row_index(b, m)); }
        const Eigen::MatrixXd &solver(Branch b, std::size_t m) const { return solve_.at(row_index(b, m)); }
        double condition(Branch b, std::size_t m) const { return cond_.at(row_index(b, m)); }

        // nullptr when the kernel is zero
        const Eigen::MatrixXd *cross(Branch b, std::size_t m, Branch bc, std::size_t i) const
        {
            if ((m > i ? m - i : i - m) >= k_ || m >= m_ || i >= m_)
                return nullptr;
            const Eigen::MatrixXd &d = cross_[cross_index(b, m, bc, i)];
            return d.size() ? &d : nullptr;
        }

        // Symbols whose estimates enter the compensation of (b, m).
        std::vector<SymbolRef> references(Branch b, std::size_t m) const
        {
            std::vector<SymbolRef> r;
            for (Branch bc : {Branch::in_phase, Branch::quadrature})
                for (std::size_t i = 0; i < m_; ++i)
                    if (cross(b, m, bc, i))
                        r.push_back({bc, i});
            return r;
        }

        SymbolRef root() const { return default_schedule(k_, m_).front(); }

    private:
        std::size_t row_index(Branch b, std::size_t m) const { return std::size_t(b) * m_ + m; }
        std::size_t cross_index(Branch b, std::size_t m, Branch bc, std::size_t i) const
        {
            const std::size_t band = 2 * k_ - 1;
            return ((row_index(b, m) * 2) + std::size_t(bc)) * band + (i + k_ - 1 - m);
        }

        std::size_t n_ = 0, m_ = 0, k_ = 0;
        Truncation cut_{};
        CompensationOptions opt_{};
        bool identity_ = true;
        std::vector<Eigen::MatrixXd> self_, solve_, cross_;
        std::vector<double> cond_;
    };

    inline CompensationSet build_compensation(const PrototypeFilter &f, const FbmcConfig &cfg, const CompensationOptions &opt = {})
    {
        return CompensationSet::build(f, cfg.block_len, cfg.cut, opt);
    }

    enum class EstimateState : std::uint8_t
    {
        missing,
        sliced,      // hard decision on an uncompensated output
        compensated, // produced by the compensator or supplied by a genie
    };

    // Current symbol estimates of one stream, N x M per branch.
    struct KnownSymbols
    {
        Eigen::MatrixXd values[2];
        std::vector<EstimateState> state[2];

        KnownSymbols() = default;
        KnownSymbols(std::size_t n, std::size_t block_len)
        {
            for (int b = 0; b < 2; ++b)
            {
                values[b] = Eigen::MatrixXd::Zero(ix(n), ix(block_len));
                state[b].assign(block_len, EstimateState::missing);
            }
        }

        EstimateState at(SymbolRef r) const { return state[int(r.branch)].at(r.m); }
        void set(SymbolRef r, const Eigen::VectorXd &v, EstimateState st)
        {
            values[int(r.branch)].col(ix(r.m)) = v;
            state[int(r.branch)].at(r.m) = st;
        }
    };

    // Compensated estimate of symbol (b, m) from the equalized vector u (u-bar_m for
    // the I branch, u-tilde_m for the Q branch).
    inline Eigen::VectorXd compensate_symbol(Branch b, std::size_t m, const Eigen::VectorXcd &u, const KnownSymbols &known,
                                             const CompensationSet &set, bool enforce_order = true)
    {
        if (std::size_t(u.size()) != set.subcarriers())
            throw ShapeError("compensate: vector length differs from N");
        Eigen::VectorXd rhs = b == Branch::in_phase ? Eigen::VectorXd(u.real()) : Eigen::VectorXd(u.imag());
        if (set.is_identity())
            return rhs;
        const SymbolRef me{b, m}, root = set.root();
        for (Branch bc : {Branch::in_phase, Branch::quadrature})
            for (std::size_t i = 0; i < set.block_len(); ++i)
            {
                const Eigen::MatrixXd *d = set.cross(b, m, bc, i);
                if (!d)
                    continue;
                const SymbolRef ref{bc, i};
                const EstimateState st = known.at(ref);
                if (enforce_order)
                {
                    if (st == EstimateState::missing)
                        throw OrderingError("compensating " + to_string(b) + std::to_string(m) + " needs an estimate of " +
                                            to_string(bc) + std::to_string(i));
                    if (ref == root && !(me == root) && st != EstimateState::compensated)
                        throw OrderingError("compensating " + to_string(b) + std::to_string(m) + " before " + to_string(root.branch) +
                                            std::to_string(root.m) + " has been compensated");
                }
                rhs.noalias() -= *d * known.values[int(bc)].col(ix(i));
            }
        return set.solver(b, m) * rhs;
    }

    inline Eigen::VectorXd compensate_real(std::size_t m, const Eigen::VectorXcd &u_bar, const KnownSymbols &known, const CompensationSet &set)
    {
        return compensate_symbol(Branch::in_phase, m, u_bar, known, set);
    }

    inline Eigen::VectorXd compensate_imag(std::size_t m, const Eigen::VectorXcd &u_tilde, const KnownSymbols &known, const CompensationSet &set)
    {
        return compensate_symbol(Branch::quadrature, m, u_tilde, known, set);
    }

    struct BlockCompensationOptions
    {
        CompensationMode mode = CompensationMode::decision_directed;
        Modulation modulation = Modulation::qpsk;
        double symbol_power = 1.0;
        const BranchGrid *truth = nullptr;     // required in genie mode
        std::vector<SymbolRef> schedule;       // empty selects default_schedule
        bool enforce_order = true;
    };

    inline SymbolGrid compensate_block(const EqualizedGrid &u, const CompensationSet &set, const BlockCompensationOptions &opt)
    {
        if (u.streams() == 0)
            throw ShapeError("compensate_block: empty grid");
        const std::size_t n = set.subcarriers(), mcount = set.block_len();
        for (std::size_t j = 0; j < u.streams(); ++j)
            if (std::size_t(u.in_phase[j].rows()) != n || std::size_t(u.in_phase[j].cols()) != mcount ||
                u.quadrature[j].rows() != u.in_phase[j].rows() || u.quadrature[j].cols() != u.in_phase[j].cols())
                throw ShapeError("compensate_block: grid shape does not match the compensation set");
        if (opt.mode == CompensationMode::off)
            return extract_symbols(u);
        if (opt.mode == CompensationMode::genie && !opt.truth)
            throw Error("compensate_block: genie mode needs the transmitted symbols");

        const std::vector<SymbolRef> schedule = opt.schedule.empty() ? default_schedule(set.overlap(), mcount) : opt.schedule;
        SymbolGrid out(n, u.streams(), mcount);
        for (std::size_t j = 0; j < u.streams(); ++j)
        {
            KnownSymbols known(n, mcount);
            for (Branch b : {Branch::in_phase, Branch::quadrature})
            {
                const Eigen::MatrixXd init = opt.mode == CompensationMode::genie
                                                 ? opt.truth->stream(b, j)
                                                 : (b == Branch::in_phase ? Eigen::MatrixXd(u.in_phase[j].real()) : Eigen::MatrixXd(u.quadrature[j].imag()));
                for (std::size_t m = 0; m < mcount; ++m)
                {
                    Eigen::VectorXd v = init.col(ix(m));
                    if (opt.mode == CompensationMode::decision_directed)
                        for (Eigen::Index q = 0; q < v.size(); ++q)
                            v[q] = slice_axis(v[q], opt.modulation, opt.symbol_power);
                    known.set({b, m}, v, opt.mode == CompensationMode::genie ? EstimateState::compensated : EstimateState::sliced);
                }
            }

            Eigen::MatrixXd est[2] = {Eigen::MatrixXd::Zero(ix(n), ix(mcount)),
                                      Eigen::MatrixXd::Zero(ix(n), ix(mcount))};
            for (const SymbolRef &r : schedule)
            {
                const Eigen::VectorXcd uv = u.branch(r.branch, j).col(ix(r.m));
                Eigen::VectorXd s = compensate_symbol(r.branch, r.m, uv, known, set, opt.enforce_order);
                est[int(r.branch)].col(ix(r.m)) = s;
                if (opt.mode == CompensationMode::decision_directed)
                {
                    for (Eigen::Index q = 0; q < s.size(); ++q)
                        s[q] = slice_axis(s[q], opt.modulation, opt.symbol_power);
                    known.set(r, s, EstimateState::compensated);
                }
            }
            out.set_stream(j, est[0].cast<cplx>() + cplx(0.0, 1.0) * est[1].cast<cplx>());
        }
        return out;
    }
}

#endif
