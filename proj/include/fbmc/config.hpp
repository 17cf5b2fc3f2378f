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

#ifndef fbmc_config_H
#define fbmc_config_H

#include "fbmc/montecarlo.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace fbmc
{
    // Sectioned "key = value" text. Section headers may be dotted ([a.b]) to
    // express nesting; keys are addressed as "section.key". '#' and ';' start
    // comments. Every entry remembers its source line for diagnostics.
    class ConfigDocument
    {
    public:
        struct Entry
        {
            std::string value;
            std::size_t line = 0;
        };

        static ConfigDocument parse(std::string_view text)
        {
            ConfigDocument doc;
            std::string section;
            std::size_t lineno = 0;
            std::istringstream is{std::string(text)};
            std::string raw;
            while (std::getline(is, raw))
            {
                ++lineno;
                std::string line = strip_comment(raw);
                line = trim(line);
                if (line.empty())
                    continue;
                if (line.front() == '[')
                {
                    if (line.back() != ']')
                        throw ConfigError("unterminated section header", lineno);
                    section = trim(line.substr(1, line.size() - 2));
                    if (section.empty() || !valid_name(section, true))
                        throw ConfigError("invalid section name '" + section + "'", lineno);
                    continue;
                }
                const auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
                const std::string key = trim(line.substr(0, eq));
                std::string value = trim(line.substr(eq + 1));
                if (key.empty() || !valid_name(key, false))
                    throw ConfigError("invalid key '" + key + "'", lineno);
                if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
                    value = value.substr(1, value.size() - 2);
                const std::string full = section.empty() ? key : section + "." + key;
                if (doc.entries_.count(full))
                    throw ConfigError("duplicate key '" + full + "' (first set on line " +
                                          std::to_string(doc.entries_[full].line) + ")",
                                      lineno);
                doc.entries_[full] = Entry{value, lineno};
            }
            return doc;
        }

        static ConfigDocument load(const std::filesystem::path &path)
        {
            std::ifstream is(path);
            if (!is)
                throw ConfigError("cannot open config file " + path.string());
            std::stringstream ss;
            ss << is.rdbuf();
            try
            {
                return parse(ss.str());
            }
            catch (const ConfigError &e)
            {
                throw ConfigError(path.string() + ": " + e.what());
            }
        }

        bool has(const std::string &key) const { return entries_.count(key) != 0; }
        const std::map<std::string, Entry> &entries() const { return entries_; }

        void set(const std::string &key, std::string value) { entries_[key] = Entry{std::move(value), 0}; }

        std::string get_string(const std::string &key, const std::string &def) const
        {
            const auto it = entries_.find(key);
            return it == entries_.end() ? def : it->second.value;
        }

        std::size_t get_size(const std::string &key, std::size_t def) const
        {
            return get_number<std::size_t>(key, def);
        }

        std::uint64_t get_u64(const std::string &key, std::uint64_t def) const
        {
            return get_number<std::uint64_t>(key, def);
        }

        double get_double(const std::string &key, double def) const
        {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                return def;
            return parse_double(it->second.value, key, it->second.line);
        }

        bool get_bool(const std::string &key, bool def) const
        {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                return def;
            const std::string v = lowercase(it->second.value);
            if (v == "true" || v == "yes" || v == "on" || v == "1")
                return true;
            if (v == "false" || v == "no" || v == "off" || v == "0")
                return false;
            throw ConfigError(key + ": expected true or false, got '" + it->second.value + "'", it->second.line);
        }

        // Comma-separated list; "a:step:b" expands to an inclusive numeric range.
        std::vector<double> get_double_list(const std::string &key, const std::vector<double> &def) const
        {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                return def;
            return parse_double_list(it->second.value, key, it->second.line);
        }

        std::vector<std::string> get_string_list(const std::string &key, const std::vector<std::string> &def) const
        {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                return def;
            std::vector<std::string> out;
            std::stringstream ss(it->second.value);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!trim(tok).empty())
                    out.push_back(trim(tok));
            return out;
        }

        std::size_t line_of(const std::string &key) const
        {
            const auto it = entries_.find(key);
            return it == entries_.end() ? 0 : it->second.line;
        }

        // Rejects keys outside `known` with the line of the first offender.
        void check_known(const std::set<std::string> &known) const
        {
            for (const auto &[k, e] : entries_)
                if (!known.count(k))
                    throw ConfigError("unknown key '" + k + "'", e.line);
        }

        // Serialize grouped by section, keys sorted.
        std::string dump() const
        {
            std::map<std::string, std::vector<std::pair<std::string, std::string>>> grouped;
            for (const auto &[k, e] : entries_)
            {
                const auto dot = k.rfind('.');
                grouped[dot == std::string::npos ? "" : k.substr(0, dot)].emplace_back(
                    dot == std::string::npos ? k : k.substr(dot + 1), e.value);
            }
            std::ostringstream os;
            bool first = true;
            for (const auto &[sec, kv] : grouped)
            {
                if (!sec.empty())
                {
                    if (!first)
                        os << "\n";
                    os << "[" << sec << "]\n";
                }
                for (const auto &[k, v] : kv)
                    os << k << " = " << v << "\n";
                first = false;
            }
            return os.str();
        }

        static double parse_double(const std::string &s, const std::string &key, std::size_t line)
        {
            double v = 0.0;
            const char *b = s.data(), *e = s.data() + s.size();
            const auto r = std::from_chars(b, e, v);
            if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
                throw ConfigError(key + ": expected a number, got '" + s + "'", line);
            return v;
        }

        static std::vector<double> parse_double_list(const std::string &value, const std::string &key, std::size_t line)
        {
            std::vector<double> out;
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ','))
            {
                tok = trim(tok);
                if (tok.empty())
                    continue;
                const auto c1 = tok.find(':');
                if (c1 == std::string::npos)
                {
                    out.push_back(parse_double(tok, key, line));
                    continue;
                }
                const auto c2 = tok.find(':', c1 + 1);
                if (c2 == std::string::npos)
                    throw ConfigError(key + ": range must be start:step:stop, got '" + tok + "'", line);
                const double a = parse_double(trim(tok.substr(0, c1)), key, line);
                const double st = parse_double(trim(tok.substr(c1 + 1, c2 - c1 - 1)), key, line);
                const double b = parse_double(trim(tok.substr(c2 + 1)), key, line);
                if (!(st > 0.0) || b < a)
                    throw ConfigError(key + ": invalid range '" + tok + "'", line);
                const std::size_t cnt = std::size_t(std::floor((b - a) / st + 1e-9)) + 1;
                for (std::size_t i = 0; i < cnt; ++i)
                    out.push_back(a + double(i) * st);
            }
            if (out.empty())
                throw ConfigError(key + ": empty list", line);
            return out;
        }

    private:
        template <typename T>
        T get_number(const std::string &key, T def) const
        {
            const auto it = entries_.find(key);
            if (it == entries_.end())
                return def;
            const std::string &s = it->second.value;
            T v{};
            const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
            if (r.ec != std::errc() || r.ptr != s.data() + s.size())
                throw ConfigError(key + ": expected a non-negative integer, got '" + s + "'", it->second.line);
            return v;
        }

        static std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        static std::string strip_comment(const std::string &s)
        {
            bool quoted = false;
            for (std::size_t i = 0; i < s.size(); ++i)
            {
                if (s[i] == '"')
                    quoted = !quoted;
                else if (!quoted && (s[i] == '#' || s[i] == ';'))
                    return s.substr(0, i);
            }
            return s;
        }

        static bool valid_name(const std::string &s, bool allow_dot)
        {
            for (char c : s)
                if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || (allow_dot && c == '.')))
                    return false;
            return true;
        }

        std::map<std::string, Entry> entries_;
    };

    // ---------------------------------------------------------------------

    inline std::string format_double(double v)
    {
        std::ostringstream os;
        os << std::setprecision(17) << v;
        return os.str();
    }

    inline FbmcConfig read_system(const ConfigDocument &d)
    {
        FbmcConfig c;
        c.n_subcarriers = d.get_size("system.subcarriers", c.n_subcarriers);
        c.block_len = d.get_size("system.block_len", c.block_len);
        c.overlap = d.get_size("system.overlap", c.overlap);
        c.n_tx = d.get_size("system.tx_antennas", c.n_tx);
        c.n_rx = d.get_size("system.rx_antennas", c.n_rx);
        c.cut.front = d.get_size("system.cut_front", c.cut.front);
        c.cut.rear = d.get_size("system.cut_rear", c.cut.rear);
        auto with_line = [&](const std::string &key, auto &&fn)
        {
            try
            {
                fn();
            }
            catch (const ConfigError &e)
            {
                if (e.line() == 0 && d.line_of(key) != 0)
                    throw ConfigError(e.what(), d.line_of(key));
                throw;
            }
        };
        with_line("system.modulation", [&]
                  { c.modulation = parse_modulation(d.get_string("system.modulation", to_string(c.modulation))); });
        with_line("system.equalizer", [&]
                  { c.equalizer = parse_equalizer(d.get_string("system.equalizer", to_string(c.equalizer))); });
        c.symbol_power = d.get_double("system.symbol_power", c.symbol_power);
        c.noise_power = d.get_double("system.noise_power", c.noise_power);
        c.seed = d.get_u64("system.seed", c.seed);
        try
        {
            c.validate();
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(std::string(e.what()) + " (in [system], line " + std::to_string(d.line_of("system.subcarriers")) + ")");
        }
        return c;
    }

    inline void write_system(ConfigDocument &d, const FbmcConfig &c)
    {
        d.set("system.subcarriers", std::to_string(c.n_subcarriers));
        d.set("system.block_len", std::to_string(c.block_len));
        d.set("system.overlap", std::to_string(c.overlap));
        d.set("system.tx_antennas", std::to_string(c.n_tx));
        d.set("system.rx_antennas", std::to_string(c.n_rx));
        d.set("system.cut_front", std::to_string(c.cut.front));
        d.set("system.cut_rear", std::to_string(c.cut.rear));
        d.set("system.modulation", to_string(c.modulation));
        d.set("system.equalizer", to_string(c.equalizer));
        d.set("system.symbol_power", format_double(c.symbol_power));
        d.set("system.noise_power", format_double(c.noise_power));
        d.set("system.seed", std::to_string(c.seed));
    }

    inline std::string to_config_text(const FbmcConfig &c)
    {
        ConfigDocument d;
        write_system(d, c);
        return d.dump();
    }

    inline FbmcConfig parse_fbmc_config(std::string_view text) { return read_system(ConfigDocument::parse(text)); }

    // Everything a CLI run needs besides the subcommand.
    struct ScenarioConfig
    {
        FbmcConfig system;
        std::string filter_kind = "iota";
        std::filesystem::path filter_path;
        std::string channel_profile = "epa";
        double sample_rate_hz = 1.92e6;
        std::filesystem::path channel_path;
        std::vector<double> ebn0_db{0, 5, 10, 15, 20, 25, 30};
        std::size_t min_errors = 200;
        std::size_t max_trials = 2000;
        std::size_t min_trials = 0;
        std::size_t batch = 16;
        std::size_t threads = 0;
        bool coded = false;
        std::vector<BerScheme> schemes{BerScheme::use_it_all, BerScheme::one_front, BerScheme::same_length,
                                       BerScheme::compensated, BerScheme::ofdm};
        CompensationMode compensation = CompensationMode::decision_directed;
        CompensationSolver solver = CompensationSolver::mmse;
        KernelModel kernel_model = KernelModel::truncation;
        std::size_t cp_len = 0;
        std::vector<std::size_t> se_block_sizes{5, 10, 20};
        std::string format = "csv";
    };

    inline const std::set<std::string> &scenario_keys()
    {
        static const std::set<std::string> k{
            "system.subcarriers", "system.block_len", "system.overlap", "system.tx_antennas", "system.rx_antennas",
            "system.cut_front", "system.cut_rear", "system.modulation", "system.equalizer", "system.symbol_power",
            "system.noise_power", "system.seed", "filter.kind", "filter.path", "channel.profile",
            "channel.sample_rate_hz", "channel.path", "simulation.ebn0_db", "simulation.min_errors",
            "simulation.max_trials", "simulation.min_trials", "simulation.batch", "simulation.threads", "simulation.coded",
            "simulation.schemes", "simulation.compensation", "simulation.compensation_solver",
            "simulation.kernel_model", "simulation.cp_len", "se.block_sizes", "output.format"};
        return k;
    }

    inline ScenarioConfig read_scenario(const ConfigDocument &d, const std::filesystem::path &base_dir = {})
    {
        d.check_known(scenario_keys());
        ScenarioConfig s;
        s.system = read_system(d);
        auto at = [&](const std::string &key, auto &&fn)
        {
            try
            {
                fn();
            }
            catch (const ConfigError &e)
            {
                if (e.line() == 0 && d.line_of(key) != 0)
                    throw ConfigError(e.what(), d.line_of(key));
                throw;
            }
        };
        auto resolve = [&](const std::string &p) -> std::filesystem::path
        {
            if (p.empty())
                return {};
            std::filesystem::path q(p);
            return q.is_relative() && !base_dir.empty() ? base_dir / q : q;
        };
        s.filter_kind = lowercase(d.get_string("filter.kind", s.filter_kind));
        if (s.filter_kind != "iota" && s.filter_kind != "file")
            throw ConfigError("filter.kind must be iota or file", d.line_of("filter.kind"));
        s.filter_path = resolve(d.get_string("filter.path", ""));
        if (s.filter_kind == "file" && s.filter_path.empty())
            throw ConfigError("filter.kind = file needs filter.path", d.line_of("filter.kind"));
        s.channel_profile = lowercase(d.get_string("channel.profile", s.channel_profile));
        if (s.channel_profile != "epa" && s.channel_profile != "flat" && s.channel_profile != "file")
            throw ConfigError("channel.profile must be epa, flat or file", d.line_of("channel.profile"));
        s.sample_rate_hz = d.get_double("channel.sample_rate_hz", s.sample_rate_hz);
        if (!(s.sample_rate_hz > 0.0))
            throw ConfigError("channel.sample_rate_hz must be positive", d.line_of("channel.sample_rate_hz"));
        s.channel_path = resolve(d.get_string("channel.path", ""));
        if (s.channel_profile == "file" && s.channel_path.empty())
            throw ConfigError("channel.profile = file needs channel.path", d.line_of("channel.profile"));
        s.ebn0_db = d.get_double_list("simulation.ebn0_db", s.ebn0_db);
        for (std::size_t i = 1; i < s.ebn0_db.size(); ++i)
            if (!(s.ebn0_db[i] > s.ebn0_db[i - 1]))
                throw ConfigError("simulation.ebn0_db must be strictly ascending", d.line_of("simulation.ebn0_db"));
        s.min_errors = d.get_size("simulation.min_errors", s.min_errors);
        s.max_trials = d.get_size("simulation.max_trials", s.max_trials);
        if (s.max_trials == 0)
            throw ConfigError("simulation.max_trials must be positive", d.line_of("simulation.max_trials"));
        s.min_trials = d.get_size("simulation.min_trials", s.min_trials);
        s.batch = d.get_size("simulation.batch", s.batch);
        if (s.batch == 0)
            throw ConfigError("simulation.batch must be positive", d.line_of("simulation.batch"));
        s.threads = d.get_size("simulation.threads", s.threads);
        s.coded = d.get_bool("simulation.coded", s.coded);
        at("simulation.schemes", [&]
           {
            if (d.has("simulation.schemes"))
            {
                s.schemes.clear();
                for (const auto &n : d.get_string_list("simulation.schemes", {}))
                    s.schemes.push_back(parse_ber_scheme(n));
            } });
        at("simulation.compensation", [&]
           { s.compensation = parse_compensation_mode(d.get_string("simulation.compensation", to_string(s.compensation))); });
        at("simulation.compensation_solver", [&]
           { s.solver = parse_compensation_solver(d.get_string("simulation.compensation_solver", to_string(s.solver))); });
        at("simulation.kernel_model", [&]
           { s.kernel_model = parse_kernel_model(d.get_string("simulation.kernel_model", to_string(s.kernel_model))); });
        s.cp_len = d.get_size("simulation.cp_len", s.cp_len);
        if (d.has("se.block_sizes"))
        {
            s.se_block_sizes.clear();
            for (double v : d.get_double_list("se.block_sizes", {}))
            {
                if (v < 1 || v != std::floor(v))
                    throw ConfigError("se.block_sizes must hold positive integers", d.line_of("se.block_sizes"));
                s.se_block_sizes.push_back(std::size_t(v));
            }
        }
        s.format = lowercase(d.get_string("output.format", s.format));
        if (s.format != "csv" && s.format != "json")
            throw ConfigError("output.format must be csv or json", d.line_of("output.format"));
        return s;
    }

    inline ScenarioConfig load_scenario(const std::filesystem::path &path)
    {
        const ConfigDocument d = ConfigDocument::load(path);
        try
        {
            return read_scenario(d, path.parent_path());
        }
        catch (const ConfigError &e)
        {
            throw ConfigError(path.string() + ": " + e.what());
        }
    }

    inline PrototypeFilter make_filter(const ScenarioConfig &s)
    {
        if (s.filter_kind == "file")
        {
            PrototypeFilter f = load_coefficients(s.filter_path);
            if (f.subcarriers() != s.system.n_subcarriers || f.overlap() != s.system.overlap)
                throw ConfigError("coefficient file " + s.filter_path.string() + " does not match N and K of [system]");
            return f;
        }
        return generate_iota(s.system.n_subcarriers, s.system.overlap);
    }

    inline TapProfile make_profile(const ScenarioConfig &s)
    {
        if (s.channel_profile == "flat")
            return flat_profile();
        if (s.channel_profile == "file")
            return load_profile(s.channel_path, s.sample_rate_hz);
        return epa_profile(s.sample_rate_hz);
    }

    inline LinkScenario make_link(const ScenarioConfig &s)
    {
        return LinkScenario{s.system, make_filter(s), make_profile(s)};
    }

    inline BerSettings make_ber_settings(const ScenarioConfig &s)
    {
        BerSettings b;
        b.ebn0_db = s.ebn0_db;
        b.min_errors = s.min_errors;
        b.max_trials = s.max_trials;
        b.min_trials = s.min_trials;
        b.batch = s.batch;
        b.threads = s.threads;
        b.coded = s.coded;
        b.compensation = s.compensation;
        b.solver = s.solver;
        b.kernel_model = s.kernel_model;
        b.cp_len = s.cp_len;
        return b;
    }
}

#endif
