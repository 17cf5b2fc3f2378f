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

#ifndef fbmc_error_H
#define fbmc_error_H

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fbmc
{
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Invalid scenario parameters or a malformed configuration file.
    // line() is 1-based and 0 when the problem is not tied to a file line.
    class ConfigError : public Error
    {
    public:
        explicit ConfigError(const std::string &msg, std::size_t line = 0)
            : Error(line ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
        std::size_t line() const noexcept { return line_; }

    private:
        std::size_t line_;
    };

    class ShapeError : public Error
    {
    public:
        using Error::Error;
    };

    class SingularityError : public Error
    {
    public:
        SingularityError(const std::string &msg, std::size_t subcarrier)
            : Error(msg), subcarrier_(subcarrier) {}
        std::size_t subcarrier() const noexcept { return subcarrier_; }

    private:
        std::size_t subcarrier_;
    };

    class ConditioningError : public Error
    {
    public:
        ConditioningError(const std::string &msg, std::size_t symbol, double cond)
            : Error(msg), symbol_(symbol), cond_(cond) {}
        std::size_t symbol() const noexcept { return symbol_; }
        double condition() const noexcept { return cond_; }

    private:
        std::size_t symbol_;
        double cond_;
    };

    // A compensation step referenced a symbol estimate that is not available yet.
    class OrderingError : public Error
    {
    public:
        using Error::Error;
    };

    class IoError : public Error
    {
    public:
        using Error::Error;
    };
}

#endif
