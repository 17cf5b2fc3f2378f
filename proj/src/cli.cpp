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

#include "fbmc/cli.hpp"
#include "fbmc/io.hpp"

#include <CLI11.hpp>

namespace fbmc
{
    struct CliOptions
    {
        std::string subcommand;
        std::string config_path;
        std::string out_path;
        std::string case_name = "same_length";
        std::string snr;
        std::optional<std::size_t> min_errors, max_trials, threads;
        std::optional<std::uint64_t> seed;
        std::string compensate;
        std::string format;
        std::string schemes;
    };

    namespace detail
    {
        inline ScenarioConfig resolve_scenario(const CliOptions &o)
        {
            ScenarioConfig s;
            if (!o.config_path.empty())
                s = load_scenario(o.config_path);
            if (o.seed)
                s.system.seed = *o.seed;
            if (o.min_errors)
                s.min_errors = *o.min_errors;
            if (o.max_trials)
            {
                if (*o.max_trials == 0)
                    throw ConfigError("--max-trials must be positive");
                s.max_trials = *o.max_trials;
            }
            if (o.threads)
                s.threads = *o.threads;
            if (!o.snr.empty())
            {
                s.ebn0_db = ConfigDocument::parse_double_list(o.snr, "--snr", 0);
                for (std::size_t i = 1; i < s.ebn0_db.size(); ++i)
                    if (!(s.ebn0_db[i] > s.ebn0_db[i - 1]))
                        throw ConfigError("--snr must be strictly ascending");
            }
            if (!o.compensate.empty())
                s.compensation = parse_compensation_mode(o.compensate);
            if (!o.format.empty())
            {
                s.format = lowercase(o.format);
                if (s.format != "csv" && s.format != "json")
                    throw ConfigError("--format must be csv or json");
            }
            if (!o.schemes.empty())
            {
                s.schemes.clear();
                std::stringstream ss(o.schemes);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty())
                        s.schemes.push_back(parse_ber_scheme(tok));
            }
            s.system.validate();
            return s;
        }

        inline void progress_line(std::ostream &err, const BerPoint &p)
        {
            err << "[" << to_string(p.scheme) << "] Eb/N0 " << fmt_num(p.ebn0_db) << " dB: " << p.bit_errors << " errors / "
                << p.bits << " bits in " << p.trials << " blocks, BER " << fmt_num(p.ber)
                << (p.converged ? "" : " (not converged)") << "\n";
        }

        inline std::string run_sir(const ScenarioConfig &s, const CliOptions &o, std::ostream &err)
        {
            const TruncationCase tc = parse_truncation_case(o.case_name);
            FbmcConfig c = s.system;
            c.cut = truncation_case(c.overlap, tc);
            c.validate();
            const PrototypeFilter f = make_filter(s);
            SirOptions so;
            so.compensated = s.compensation != CompensationMode::off && !o.compensate.empty();
            so.compensation.model = s.kernel_model;
            err << "sir: N=" << c.n_subcarriers << " K=" << c.overlap << " M=" << c.block_len << " cut=(" << c.cut.front << ","
                << c.cut.rear << ")" << (so.compensated ? " compensated" : "") << "\n";
            const SirReport r = sir_table(f, c.block_len, c.cut, so);
            std::ostringstream os;
            if (s.format == "json")
                os << to_json(r, to_string(tc)).dump(2) << "\n";
            else
                write_sir_csv(os, r, to_string(tc));
            return os.str();
        }

        inline std::string run_ber(const ScenarioConfig &s, bool ofdm_only, std::ostream &err)
        {
            const LinkScenario link = make_link(s);
            BerSettings b = make_ber_settings(s);
            b.progress = [&err](const BerPoint &p)
            { progress_line(err, p); };
            std::vector<BerPoint> all;
            const std::vector<BerScheme> schemes = ofdm_only ? std::vector<BerScheme>{BerScheme::ofdm} : s.schemes;
            for (BerScheme sc : schemes)
            {
                err << "ber: scheme " << to_string(sc) << "\n";
                auto pts = ber_curve(link, sc, b);
                all.insert(all.end(), pts.begin(), pts.end());
            }
            std::ostringstream os;
            if (s.format == "json")
                os << to_json(all).dump(2) << "\n";
            else
                write_ber_csv(os, all);
            return os.str();
        }

        inline std::string run_se(const ScenarioConfig &s, std::ostream &err)
        {
            const PrototypeFilter f = make_filter(s);
            std::vector<SeReport> all;
            for (std::size_t m : s.se_block_sizes)
            {
                FbmcConfig c = s.system;
                c.block_len = m;
                err << "se: M=" << m << "\n";
                auto rs = spectral_efficiency(f, c, s.ebn0_db);
                all.insert(all.end(), rs.begin(), rs.end());
            }
            std::ostringstream os;
            if (s.format == "json")
                os << to_json(all).dump(2) << "\n";
            else
                write_se_csv(os, all);
            return os.str();
        }
    }

    int run_cli(std::vector<std::string> args, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"fbmclab: MIMO-FBMC/OQAM link-level analysis"};
        app.name("fbmclab");
        app.require_subcommand(1);
        CliOptions o;

        auto common = [&](CLI::App *sub, bool sim)
        {
            sub->add_option("--config", o.config_path, "configuration file")->check(CLI::ExistingFile);
            sub->add_option("--out", o.out_path, "output file (default: standard output)");
            sub->add_option("--seed", o.seed, "master seed");
            sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
            sub->add_option("--compensate", o.compensate, "off, genie or dd")->check(CLI::IsMember({"off", "genie", "dd"}));
            if (sim)
            {
                sub->add_option("--snr", o.snr, "comma separated Eb/N0 list in dB (a:step:b ranges allowed)");
                sub->add_option("--min-errors", o.min_errors, "bit errors per point");
                sub->add_option("--max-trials", o.max_trials, "block limit per point");
                sub->add_option("--threads", o.threads, "worker threads");
            }
        };
        CLI::App *sir = app.add_subcommand("sir", "per-symbol signal, interference and SIR");
        common(sir, false);
        sir->add_option("--case", o.case_name, "truncation case");
        CLI::App *ber = app.add_subcommand("ber", "Monte-Carlo BER curves");
        common(ber, true);
        ber->add_option("--schemes", o.schemes, "comma separated BER schemes");
        CLI::App *se = app.add_subcommand("se", "spectral efficiency");
        common(se, false);
        se->add_option("--snr", o.snr, "comma separated Eb/N0 list in dB");
        CLI::App *ofdm = app.add_subcommand("ofdm", "CP-OFDM BER baseline");
        common(ofdm, true);
        CLI::App *dump = app.add_subcommand("dump-kernels", "write filter, Delta G, kernel and compensation matrices");
        common(dump, false);
        dump->add_option("--case", o.case_name, "truncation case");

        std::reverse(args.begin(), args.end());
        try
        {
            app.parse(args);
        }
        catch (const CLI::CallForHelp &)
        {
            out << app.help();
            return exit_ok;
        }
        catch (const CLI::ParseError &e)
        {
            err << "fbmclab: " << e.what() << "\n";
            return exit_config;
        }
        for (CLI::App *s : {sir, ber, se, ofdm, dump})
            if (s->parsed())
                o.subcommand = s->get_name();

        try
        {
            const ScenarioConfig s = detail::resolve_scenario(o);
            std::string text;
            if (o.subcommand == "sir")
                text = detail::run_sir(s, o, err);
            else if (o.subcommand == "ber")
                text = detail::run_ber(s, false, err);
            else if (o.subcommand == "ofdm")
                text = detail::run_ber(s, true, err);
            else if (o.subcommand == "se")
                text = detail::run_se(s, err);
            else
            {
                if (o.out_path.empty())
                    throw ConfigError("dump-kernels needs --out");
                FbmcConfig c = s.system;
                c.cut = truncation_case(c.overlap, o.case_name);
                c.validate();
                CompensationOptions co;
                co.model = s.kernel_model;
                const auto recs = kernel_records(make_filter(s), c.block_len, c.cut, co);
                save_matrices(o.out_path, recs);
                err << "dump-kernels: " << recs.size() << " records written to " << o.out_path << "\n";
                return exit_ok;
            }
            if (o.out_path.empty())
                out << text;
            else
            {
                std::ofstream f(o.out_path, std::ios::binary);
                if (!f || !(f << text))
                    throw IoError("cannot write " + o.out_path);
                err << o.subcommand << ": wrote " << o.out_path << "\n";
            }
            return exit_ok;
        }
        catch (const ConfigError &e)
        {
            err << "fbmclab: config error: " << e.what() << "\n";
            return exit_config;
        }
        catch (const std::exception &e)
        {
            err << "fbmclab: error: " << e.what() << "\n";
            return exit_failure;
        }
    }

    int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err)
    {
        std::vector<std::string> args;
        for (int i = 1; i < argc; ++i)
            args.emplace_back(argv[i]);
        return run_cli(std::move(args), out, err);
    }
}
