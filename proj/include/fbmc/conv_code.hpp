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

#ifndef fbmc_conv_code_H
#define fbmc_conv_code_H

#include "fbmc/core_model.hpp"

#include <bit>
#include <limits>
#include <numeric>

namespace fbmc
{
    // Rate 1/2 convolutional code, constraint length 7, generators 133 / 171
    // (octal), zero-terminated with 6 tail bits. Hard-decision Viterbi decoding.
    class ConvCode
    {
    public:
        static constexpr unsigned constraint = 7;
        static constexpr unsigned memory = constraint - 1;
        static constexpr unsigned states = 1u << memory;
        static constexpr unsigned g0 = 0133;
        static constexpr unsigned g1 = 0171;

        static std::size_t coded_length(std::size_t info_bits) { return 2 * (info_bits + memory); }

        // Largest information length whose codeword fits into `coded` bits.
        static std::size_t info_length(std::size_t coded)
        {
            return coded / 2 > memory ? coded / 2 - memory : 0;
        }

        static Bits encode(const Bits &info)
        {
            Bits out;
            out.reserve(coded_length(info.size()));
            unsigned state = 0;
            auto push = [&](unsigned u)
            {
                const unsigned reg = (u << memory) | state;
                out.push_back(std::uint8_t(std::popcount(reg & g0) & 1));
                out.push_back(std::uint8_t(std::popcount(reg & g1) & 1));
                state = reg >> 1;
            };
            for (std::uint8_t b : info)
                push(b & 1u);
            for (unsigned i = 0; i < memory; ++i)
                push(0);
            return out;
        }

        static Bits decode(const Bits &coded)
        {
            if (coded.size() % 2 != 0 || coded.size() < 2 * memory)
                throw ShapeError("ConvCode::decode: invalid codeword length " + std::to_string(coded.size()));
            const std::size_t steps = coded.size() / 2;
            constexpr unsigned inf = std::numeric_limits<unsigned>::max() / 2;
            std::array<unsigned, states> metric, next;
            metric.fill(inf);
            metric[0] = 0;
            // decision[t][s]: input bit that led to state s at step t
            std::vector<std::array<std::uint8_t, states>> decision(steps);
            std::vector<std::array<std::uint8_t, states>> from_hi(steps);
            for (std::size_t t = 0; t < steps; ++t)
            {
                next.fill(inf);
                const unsigned r0 = coded[2 * t] & 1u, r1 = coded[2 * t + 1] & 1u;
                for (unsigned s = 0; s < states; ++s)
                {
                    if (metric[s] >= inf)
                        continue;
                    for (unsigned u = 0; u < 2; ++u)
                    {
                        const unsigned reg = (u << memory) | s;
                        const unsigned o0 = std::popcount(reg & g0) & 1, o1 = std::popcount(reg & g1) & 1;
                        const unsigned m = metric[s] + (o0 ^ r0) + (o1 ^ r1);
                        const unsigned ns = reg >> 1;
                        if (m < next[ns])
                        {
                            next[ns] = m;
                            decision[t][ns] = std::uint8_t(u);
                            from_hi[t][ns] = std::uint8_t(s & 1u);
                        }
                    }
                }
                metric = next;
            }
            Bits path(steps);
            unsigned s = 0; // terminated trellis ends in state 0
            for (std::size_t t = steps; t-- > 0;)
            {
                path[t] = decision[t][s];
                s = ((s << 1) & (states - 1)) | from_hi[t][s];
            }
            path.resize(steps - memory);
            return path;
        }
    };

    // Fixed pseudo-random permutation of length n.
    inline std::vector<std::size_t> make_interleaver(std::size_t n, std::uint64_t seed)
    {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), std::size_t(0));
        Rng rng(seed);
        std::shuffle(p.begin(), p.end(), rng.engine());
        return p;
    }

    inline Bits interleave(const Bits &in, const std::vector<std::size_t> &perm)
    {
        Bits out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            out[perm[i]] = in[i];
        return out;
    }

    inline Bits deinterleave(const Bits &in, const std::vector<std::size_t> &perm)
    {
        Bits out(in.size());
        for (std::size_t i = 0; i < in.size(); ++i)
            out[i] = in[perm[i]];
        return out;
    }
}

#endif
