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

#ifndef fbmc_dft_H
#define fbmc_dft_H

#include "fbmc/core_model.hpp"

#include <unsupported/Eigen/FFT>

namespace fbmc
{
    // Unitary N-point DFT, F[p,q] = exp(-j 2 pi p q / N) / sqrt(N).
    // The underlying FFT object caches plans lazily and is not thread-safe;
    // use one instance per thread.
    class UnitaryDft
    {
    public:
        explicit UnitaryDft(std::size_t n) : n_(n), scale_(1.0 / std::sqrt(double(n)))
        {
            fft_.SetFlag(Eigen::FFT<double>::Unscaled);
        }

        std::size_t size() const { return n_; }

        void forward(const Eigen::VectorXcd &in, Eigen::VectorXcd &out)
        {
            out.resize(ix(n_));
            fft_.fwd(out, in);
            out *= scale_;
        }

        void inverse(const Eigen::VectorXcd &in, Eigen::VectorXcd &out)
        {
            out.resize(ix(n_));
            fft_.inv(out, in);
            out *= scale_;
        }

        Eigen::VectorXcd forward(const Eigen::VectorXcd &in)
        {
            Eigen::VectorXcd out;
            forward(in, out);
            return out;
        }

        Eigen::VectorXcd inverse(const Eigen::VectorXcd &in)
        {
            Eigen::VectorXcd out;
            inverse(in, out);
            return out;
        }

    private:
        std::size_t n_;
        double scale_;
        Eigen::FFT<double> fft_;
    };

    // Diagonal entry n of the phase matrix Phi_m = diag(exp(-j pi (n + 2m) / 2)).
    // The exponent is a multiple of pi/2, so the entry is one of 1, -j, -1, j exactly.
    inline cplx oqam_phase(std::size_t n, std::size_t m)
    {
        switch ((n + 2 * m) % 4)
        {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, -1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, 1.0};
        }
    }

    // Phase applied to branch b: the Q branch carries an extra factor j.
    inline cplx oqam_phase(std::size_t n, std::size_t m, Branch b)
    {
        const cplx p = oqam_phase(n, m);
        return b == Branch::in_phase ? p : cplx(-p.imag(), p.real());
    }
}

#endif
