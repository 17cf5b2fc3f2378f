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

#ifndef fbmc_prototype_filter_H
#define fbmc_prototype_filter_H

#include "fbmc/core_model.hpp"

#include <unsupported/Eigen/FFT>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fbmc
{
    // Circular delay by d samples: out[n] = in[(n - d) mod L]. Negative d advances.
    inline Eigen::VectorXd circular_shift(const Eigen::VectorXd &in, std::ptrdiff_t d)
    {
        const std::ptrdiff_t len = in.size();
        Eigen::VectorXd out(len);
        if (len == 0)
            return out;
        for (std::ptrdiff_t n = 0; n < len; ++n)
            out[n] = in[((n - d) % len + len) % len];
        return out;
    }

    // Split a length-KN vector into K consecutive length-N slices.
    inline std::vector<Eigen::VectorXd> slice_blocks(const Eigen::VectorXd &coeffs, std::size_t n, std::size_t k)
    {
        if (std::size_t(coeffs.size()) != n * k)
            throw ShapeError("slice_blocks: length " + std::to_string(coeffs.size()) + " differs from K*N = " +
                             std::to_string(n * k));
        std::vector<Eigen::VectorXd> out;
        out.reserve(k);
        for (std::size_t i = 0; i < k; ++i)
            out.emplace_back(coeffs.segment(ix(i * n), ix(n)));
        return out;
    }

    // Real prototype filter of length K*N with its half-symbol delayed Q-branch twin.
    class PrototypeFilter
    {
    public:
        PrototypeFilter() = default;

        PrototypeFilter(Eigen::VectorXd coeffs, std::size_t n, std::size_t k) : n_(n), k_(k)
        {
            if (n < 2 || n % 2 != 0)
                throw ConfigError("prototype filter needs an even subcarrier count, got " + std::to_string(n));
            if (k < 2)
                throw ConfigError("prototype filter needs overlap >= 2, got " + std::to_string(k));
            if (std::size_t(coeffs.size()) != n * k)
                throw ShapeError("prototype filter: " + std::to_string(coeffs.size()) + " coefficients for K*N = " +
                                 std::to_string(n * k));
            if (!coeffs.allFinite())
                throw ConfigError("prototype filter: non-finite coefficient");
            coeffs_[0] = std::move(coeffs);
            coeffs_[1] = circular_shift(coeffs_[0], std::ptrdiff_t(n / 2));
            slices_[0] = slice_blocks(coeffs_[0], n, k);
            slices_[1] = slice_blocks(coeffs_[1], n, k);
        }

        std::size_t subcarriers() const { return n_; }
        std::size_t overlap() const { return k_; }
        std::size_t length() const { return n_ * k_; }

        const Eigen::VectorXd &coeffs(Branch b = Branch::in_phase) const { return coeffs_[int(b)]; }

        // Diagonal of W_k for the given branch
        const Eigen::VectorXd &slice(Branch b, std::size_t k) const { return slices_[int(b)].at(k); }
        const std::vector<Eigen::VectorXd> &slices(Branch b) const { return slices_[int(b)]; }

    private:
        std::size_t n_ = 0, k_ = 0;
        Eigen::VectorXd coeffs_[2];
        std::vector<Eigen::VectorXd> slices_[2];
    };

    // Q-branch coefficients: the I-branch filter delayed by N/2 samples (circularly).
    inline Eigen::VectorXd shift_half_symbol(const PrototypeFilter &f)
    {
        return circular_shift(f.coeffs(Branch::in_phase), std::ptrdiff_t(f.subcarriers() / 2));
    }

    // IOTA pulse: a Gaussian orthogonalized in time (over half-symbol shifts),
    // then in frequency (over subcarrier shifts), sampled on a long grid and cut
    // to K*N samples around its centre. The pulse peak sits on sample K*N/2, so
    // the result satisfies w[n] = w[K*N - n]. Energy is scaled to sum(w^2) = N,
    // which makes the polyphase energy sum over all K slices one per subcarrier.
    inline PrototypeFilter generate_iota(std::size_t n, std::size_t k)
    {
        if (n < 2 || n % 2 != 0)
            throw ConfigError("generate_iota: N must be even, got " + std::to_string(n));
        if (k < 2)
            throw ConfigError("generate_iota: K must be at least 2, got " + std::to_string(k));

        const std::size_t periods = std::max<std::size_t>(32, 2 * k); // grid length in symbols
        const std::size_t lg = periods * n;
        const double half = double(lg / 2);

        Eigen::VectorXd g(ix(lg));
        for (std::size_t i = 0; i < lg; ++i)
        {
            const double u = (double(i) - half) * std::sqrt(2.0) / double(n);
            g[ix(i)] = std::exp(-M_PI * u * u);
        }

        // time orthogonalization over shifts of N/2
        Eigen::VectorXd energy = Eigen::VectorXd::Zero(ix(lg));
        const Eigen::VectorXd g2 = g.array().square();
        for (std::size_t s = 0; s < 2 * periods; ++s)
            energy += circular_shift(g2, std::ptrdiff_t(s * n / 2));
        const Eigen::VectorXd x1 = g.array() / energy.array().sqrt();

        // frequency orthogonalization over shifts of one subcarrier (periods bins)
        Eigen::FFT<double> fft;
        Eigen::VectorXcd spec;
        fft.fwd(spec, Eigen::VectorXcd(x1.cast<cplx>()));
        const Eigen::VectorXd mag2 = spec.cwiseAbs2();
        Eigen::VectorXd dd = Eigen::VectorXd::Zero(ix(lg));
        for (std::size_t s = 0; s < n; ++s)
            dd += circular_shift(mag2, std::ptrdiff_t(s * periods));
        const Eigen::VectorXcd spec2 = spec.array() / dd.array().sqrt().cast<cplx>();
        Eigen::VectorXcd y;
        fft.inv(y, spec2);

        Eigen::VectorXd w(ix(n * k));
        const std::size_t start = lg / 2 - k * n / 2;
        for (std::size_t i = 0; i < n * k; ++i)
            w[ix(i)] = y[ix(start + i)].real();

        // Remove rounding asymmetry so w[i] == w[KN - i] holds bit-exactly.
        for (std::size_t i = 1; i < n * k / 2; ++i)
        {
            const double a = 0.5 * (w[ix(i)] + w[ix(n * k - i)]);
            w[ix(i)] = a;
            w[ix(n * k - i)] = a;
        }

        w *= std::sqrt(double(n) / w.squaredNorm());
        return PrototypeFilter(std::move(w), n, k);
    }

    // Coefficient file: header "# N=<n> K=<k>" then one coefficient per line.
    inline void save_coefficients(const std::filesystem::path &path, const PrototypeFilter &f)
    {
        std::ofstream os(path);
        if (!os)
            throw IoError("cannot write coefficient file " + path.string());
        os << "# N=" << f.subcarriers() << " K=" << f.overlap() << "\n";
        os << std::setprecision(17);
        for (Eigen::Index i = 0; i < f.coeffs().size(); ++i)
            os << f.coeffs()[i] << "\n";
        if (!os)
            throw IoError("write failed for " + path.string());
    }

    inline PrototypeFilter load_coefficients(const std::filesystem::path &path)
    {
        std::ifstream is(path);
        if (!is)
            throw IoError("cannot open coefficient file " + path.string());
        std::string line;
        std::size_t lineno = 0, n = 0, k = 0;
        bool have_header = false;
        std::vector<double> values;
        while (std::getline(is, line))
        {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                continue;
            if (line[first] == '#')
            {
                if (!have_header)
                {
                    std::istringstream hs(line.substr(first + 1));
                    std::string tok;
                    while (hs >> tok)
                    {
                        if (tok.rfind("N=", 0) == 0)
                            n = std::stoul(tok.substr(2));
                        else if (tok.rfind("K=", 0) == 0)
                            k = std::stoul(tok.substr(2));
                    }
                    have_header = n > 0 && k > 0;
                }
                continue;
            }
            std::istringstream vs(line);
            double v;
            std::string rest;
            if (!(vs >> v) || (vs >> rest))
                throw ConfigError("coefficient file " + path.string() + ": expected one number", lineno);
            values.push_back(v);
        }
        if (!have_header)
            throw ConfigError("coefficient file " + path.string() + ": missing '# N=<n> K=<k>' header");
        if (values.size() != n * k)
            throw ConfigError("coefficient file " + path.string() + ": " + std::to_string(values.size()) +
                              " coefficients, header says " + std::to_string(n * k));
        return PrototypeFilter(Eigen::Map<Eigen::VectorXd>(values.data(), ix(values.size())), n, k);
    }
}

#endif
