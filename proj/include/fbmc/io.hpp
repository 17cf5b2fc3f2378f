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

#ifndef fbmc_io_H
#define fbmc_io_H

#include "fbmc/config.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstring>
#include <ostream>

namespace fbmc
{
    // ---------------------------------------------------------------------
    // Binary matrix container (little-endian):
    //   "FBMCMAT1"  u64 record count
    //   per record: u32 name length, name bytes, u64 rows, u64 cols,
    //               u32 kind (0 real, 1 complex), rows*cols values row-major
    //               (complex values as re, im pairs of f64)

    struct MatrixRecord
    {
        std::string name;
        std::size_t rows = 0, cols = 0;
        bool complex = false;
        std::vector<double> data; // row-major, interleaved re/im when complex

        static MatrixRecord from(std::string name, const Eigen::MatrixXd &m)
        {
            MatrixRecord r{std::move(name), std::size_t(m.rows()), std::size_t(m.cols()), false, {}};
            r.data.reserve(r.rows * r.cols);
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    r.data.push_back(m(i, j));
            return r;
        }

        static MatrixRecord from(std::string name, const Eigen::MatrixXcd &m)
        {
            MatrixRecord r{std::move(name), std::size_t(m.rows()), std::size_t(m.cols()), true, {}};
            r.data.reserve(2 * r.rows * r.cols);
            for (Eigen::Index i = 0; i < m.rows(); ++i)
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                {
                    r.data.push_back(m(i, j).real());
                    r.data.push_back(m(i, j).imag());
                }
            return r;
        }

        Eigen::MatrixXd real() const
        {
            if (complex)
                throw ShapeError("record '" + name + "' is complex");
            Eigen::MatrixXd m(ix(rows), ix(cols));
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    m(ix(i), ix(j)) = data[i * cols + j];
            return m;
        }

        Eigen::MatrixXcd complex_matrix() const
        {
            Eigen::MatrixXcd m(ix(rows), ix(cols));
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    m(ix(i), ix(j)) = complex ? cplx(data[2 * (i * cols + j)], data[2 * (i * cols + j) + 1])
                                              : cplx(data[i * cols + j], 0.0);
            return m;
        }
    };

    namespace detail
    {
        inline constexpr char matrix_magic[8] = {'F', 'B', 'M', 'C', 'M', 'A', 'T', '1'};

        template <typename T>
        void put(std::ostream &os, T v)
        {
            static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
            os.write(reinterpret_cast<const char *>(&v), sizeof(T));
        }

        template <typename T>
        T get(std::istream &is, const std::string &what)
        {
            T v{};
            if (!is.read(reinterpret_cast<char *>(&v), sizeof(T)))
                throw IoError("truncated matrix file while reading " + what);
            return v;
        }
    }

    inline void write_matrices(std::ostream &os, const std::vector<MatrixRecord> &recs)
    {
        os.write(detail::matrix_magic, 8);
        detail::put<std::uint64_t>(os, recs.size());
        for (const auto &r : recs)
        {
            const std::size_t expect = r.rows * r.cols * (r.complex ? 2 : 1);
            if (r.data.size() != expect)
                throw ShapeError("record '" + r.name + "' holds " + std::to_string(r.data.size()) + " values, expected " +
                                 std::to_string(expect));
            detail::put<std::uint32_t>(os, std::uint32_t(r.name.size()));
            os.write(r.name.data(), std::streamsize(r.name.size()));
            detail::put<std::uint64_t>(os, r.rows);
            detail::put<std::uint64_t>(os, r.cols);
            detail::put<std::uint32_t>(os, r.complex ? 1u : 0u);
            os.write(reinterpret_cast<const char *>(r.data.data()), std::streamsize(r.data.size() * sizeof(double)));
        }
        if (!os)
            throw IoError("failed writing matrix container");
    }

    inline std::vector<MatrixRecord> read_matrices(std::istream &is)
    {
        char magic[8];
        if (!is.read(magic, 8) || std::memcmp(magic, detail::matrix_magic, 8) != 0)
            throw IoError("not a matrix container (bad magic)");
        const auto count = detail::get<std::uint64_t>(is, "record count");
        std::vector<MatrixRecord> out;
        for (std::uint64_t k = 0; k < count; ++k)
        {
            MatrixRecord r;
            const auto len = detail::get<std::uint32_t>(is, "name length");
            r.name.resize(len);
            if (!is.read(r.name.data(), len))
                throw IoError("truncated matrix file while reading a name");
            r.rows = detail::get<std::uint64_t>(is, "rows");
            r.cols = detail::get<std::uint64_t>(is, "cols");
            const auto kind = detail::get<std::uint32_t>(is, "kind");
            if (kind > 1)
                throw IoError("record '" + r.name + "' has unknown kind " + std::to_string(kind));
            r.complex = kind == 1;
            r.data.resize(r.rows * r.cols * (r.complex ? 2 : 1));
            if (!is.read(reinterpret_cast<char *>(r.data.data()), std::streamsize(r.data.size() * sizeof(double))))
                throw IoError("truncated data in record '" + r.name + "'");
            out.push_back(std::move(r));
        }
        return out;
    }

    inline void save_matrices(const std::filesystem::path &path, const std::vector<MatrixRecord> &recs)
    {
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw IoError("cannot write " + path.string());
        write_matrices(os, recs);
    }

    inline std::vector<MatrixRecord> load_matrices(const std::filesystem::path &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw IoError("cannot open " + path.string());
        return read_matrices(is);
    }

    // Filter taps, Delta G blocks, truncated kernels and compensation matrices of
    // one scenario. Names: "filter/<b>", "dG/<pair>/<m>/<i>", "Q/<pair>/<m>/<i>",
    // "A/<b>/<m>", with b in {I, Q} and pair like "IQ" (row branch first).
    inline std::vector<MatrixRecord> kernel_records(const PrototypeFilter &f, std::size_t block_len, Truncation cut,
                                                    const CompensationOptions &opt = {})
    {
        auto bname = [](Branch b)
        { return std::string(b == Branch::in_phase ? "I" : "Q"); };
        std::vector<MatrixRecord> out;
        for (Branch b : {Branch::in_phase, Branch::quadrature})
            out.push_back(MatrixRecord::from("filter/" + bname(b), Eigen::MatrixXd(f.coeffs(b).transpose())));
        const CorrelationSet corr = CorrelationSet::build(f, block_len, cut);
        UnitaryDft dft(f.subcarriers());
        for (const BranchPair p : all_branch_pairs())
        {
            const std::string pn = bname(p.row) + bname(p.col);
            for (std::size_t m = 0; m < block_len; ++m)
                for (std::size_t i = 0; i < block_len; ++i)
                {
                    if (!corr.trunc(p).in_band(m, i))
                        continue;
                    const std::string tag = pn + "/" + std::to_string(m) + "/" + std::to_string(i);
                    out.push_back(MatrixRecord::from("dG/" + tag, Eigen::MatrixXd(corr.diff(p).band_block(m, i).transpose())));
                    out.push_back(MatrixRecord::from("Q/" + tag, interference_kernel(corr.trunc(p).band_block(m, i), m, i, p.col, dft)));
                }
        }
        const CompensationSet set = CompensationSet::build(f, block_len, cut, opt);
        for (Branch b : {Branch::in_phase, Branch::quadrature})
            for (std::size_t m = 0; m < block_len; ++m)
                out.push_back(MatrixRecord::from("A/" + bname(b) + "/" + std::to_string(m), set.self(b, m)));
        return out;
    }

    // ---------------------------------------------------------------------
    // CSV and JSON emission. Numbers carry 12 significant digits.

    inline std::string fmt_num(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }

    inline std::string csv_field(const std::string &s)
    {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    inline std::string branch_tag(Branch b) { return b == Branch::in_phase ? "I" : "Q"; }

    inline void write_sir_csv(std::ostream &os, const SirReport &r, const std::string &case_name)
    {
        os << "# fbmclab-sir v1\n";
        os << "case,N,K,M,cut_front,cut_rear,compensated,branch,m,signal_db,interference_db,sir_db\n";
        for (const auto &row : r.rows)
            os << case_name << ',' << r.n_subcarriers << ',' << r.overlap << ',' << r.block_len << ',' << r.cut.front << ','
               << r.cut.rear << ',' << (r.compensated ? 1 : 0) << ',' << branch_tag(row.branch) << ',' << row.m << ','
               << fmt_num(row.signal_db) << ',' << fmt_num(row.interference_db) << ',' << fmt_num(row.sir_db) << '\n';
    }

    inline void write_ber_csv(std::ostream &os, const std::vector<BerPoint> &pts)
    {
        os << "# fbmclab-ber v1\n";
        os << "scheme,ebn0_db,bit_errors,bits,trials,ber,ci_low,ci_high,converged,note\n";
        for (const auto &p : pts)
            os << to_string(p.scheme) << ',' << fmt_num(p.ebn0_db) << ',' << p.bit_errors << ',' << p.bits << ',' << p.trials
               << ',' << fmt_num(p.ber) << ',' << fmt_num(p.ci_low) << ',' << fmt_num(p.ci_high) << ','
               << (p.converged ? 1 : 0) << ',' << csv_field(p.note) << '\n';
    }

    inline std::string join_sinr_db(const std::vector<double> &sinr)
    {
        std::string s;
        for (std::size_t i = 0; i < sinr.size(); ++i)
            s += (i ? ";" : "") + fmt_num(to_db(sinr[i]));
        return s;
    }

    inline void write_se_csv(std::ostream &os, const std::vector<SeReport> &rs)
    {
        os << "# fbmclab-se v1\n";
        os << "scheme,M,K,alpha,cut_front,cut_rear,ebn0_db,noise_power,se,eta,overhead_eta,overhead_payload,overhead_length,"
              "sinr_db\n";
        for (const auto &r : rs)
            os << to_string(r.scheme) << ',' << r.block_len << ',' << r.overlap << ',' << r.alpha << ',' << r.cut.front << ','
               << r.cut.rear << ',' << fmt_num(r.ebn0_db) << ',' << fmt_num(r.noise_power) << ',' << fmt_num(r.se) << ','
               << fmt_num(r.eta) << ',' << fmt_num(1.0 - r.eta) << ',' << fmt_num(r.overhead_payload) << ','
               << fmt_num(r.overhead_length) << ',' << join_sinr_db(r.sinr) << '\n';
    }

    inline nlohmann::ordered_json to_json(const SirReport &r, const std::string &case_name)
    {
        nlohmann::ordered_json j;
        j["schema"] = "fbmclab-sir v1";
        j["case"] = case_name;
        j["N"] = r.n_subcarriers;
        j["K"] = r.overlap;
        j["M"] = r.block_len;
        j["cut_front"] = r.cut.front;
        j["cut_rear"] = r.cut.rear;
        j["compensated"] = r.compensated;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto &row : r.rows)
            j["rows"].push_back({{"branch", branch_tag(row.branch)},
                                 {"m", row.m},
                                 {"signal_db", row.signal_db},
                                 {"interference_db", row.interference_db},
                                 {"sir_db", row.sir_db}});
        return j;
    }

    inline nlohmann::ordered_json to_json(const std::vector<BerPoint> &pts)
    {
        nlohmann::ordered_json j;
        j["schema"] = "fbmclab-ber v1";
        j["points"] = nlohmann::ordered_json::array();
        for (const auto &p : pts)
            j["points"].push_back({{"scheme", to_string(p.scheme)},
                                   {"ebn0_db", p.ebn0_db},
                                   {"bit_errors", p.bit_errors},
                                   {"bits", p.bits},
                                   {"trials", p.trials},
                                   {"ber", p.ber},
                                   {"ci_low", p.ci_low},
                                   {"ci_high", p.ci_high},
                                   {"converged", p.converged},
                                   {"note", p.note}});
        return j;
    }

    inline nlohmann::ordered_json to_json(const std::vector<SeReport> &rs)
    {
        nlohmann::ordered_json j;
        j["schema"] = "fbmclab-se v1";
        j["points"] = nlohmann::ordered_json::array();
        for (const auto &r : rs)
        {
            nlohmann::ordered_json sinr = nlohmann::ordered_json::array();
            for (double s : r.sinr)
                sinr.push_back(to_db(s));
            j["points"].push_back({{"scheme", to_string(r.scheme)},
                                   {"M", r.block_len},
                                   {"K", r.overlap},
                                   {"alpha", r.alpha},
                                   {"cut_front", r.cut.front},
                                   {"cut_rear", r.cut.rear},
                                   {"ebn0_db", r.ebn0_db},
                                   {"noise_power", r.noise_power},
                                   {"se", r.se},
                                   {"eta", r.eta},
                                   {"overhead_eta", 1.0 - r.eta},
                                   {"overhead_payload", r.overhead_payload},
                                   {"overhead_length", r.overhead_length},
                                   {"sinr_db", sinr}});
        }
        return j;
    }
}

#endif
