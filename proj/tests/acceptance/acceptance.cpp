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


// Acceptance run. Prints one PASS/FAIL line per criterion, preceded by the
// individual checks and their measured values. Exit status is the number of
// failed criteria (capped at 7).

#include "dense_oracle.hpp"
#include "fbmc/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace fbmc;
namespace fs = std::filesystem;

namespace
{
    const fs::path source_dir{FBMCLAB_SOURCE_DIR};

    struct Criterion
    {
        std::string id;
        std::string title;
        bool ok = true;

        void check(bool pass, const std::string &what)
        {
            ok = ok && pass;
            std::cout << "    " << (pass ? "ok   " : "miss ") << what << "\n";
        }
    };

    std::string num(double v, int prec = 3)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*f", prec, v);
        return buf;
    }

    std::string sci(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", v);
        return buf;
    }

    std::string cut_str(Truncation c) { return "(" + std::to_string(c.front) + "," + std::to_string(c.rear) + ")"; }

    double seconds_since(std::chrono::steady_clock::time_point t0)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    std::vector<Truncation> all_cuts(std::size_t k)
    {
        std::vector<Truncation> out;
        for (std::size_t f = 0; f < k; ++f)
            for (std::size_t r = 0; f + r <= k - 1; ++r)
                out.push_back({f, r});
        return out;
    }

    double max_abs(const Eigen::MatrixXd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
    double max_abs(const Eigen::MatrixXcd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

    // ---------------------------------------------------------------------

    void exact_algebra(Criterion &c)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n = 16, m = 4;
        double additivity = 0.0, zero_cut = 0.0, outside_band = 0.0;
        for (std::size_t k : {4u, 5u, 6u})
        {
            const PrototypeFilter f = generate_iota(n, k);
            for (const Truncation cut : all_cuts(k))
            {
                const CorrelationSet s = CorrelationSet::build(f, m, cut);
                for (const BranchPair p : all_branch_pairs())
                {
                    additivity = std::max(additivity, max_abs(Eigen::MatrixXd(s.orig(p).dense() - s.trunc(p).dense() - s.diff(p).dense())));
                    if (cut.none())
                        zero_cut = std::max(zero_cut, s.diff(p).max_abs());
                }
            }
            // every branch pair vanishes for |m - i| >= K
            const std::size_t mb = 2 * k + 2;
            const CorrelationSet s = CorrelationSet::build(f, mb, {1, 1});
            for (const BranchPair p : all_branch_pairs())
            {
                const Eigen::MatrixXd d = s.trunc(p).dense();
                for (std::size_t a = 0; a < mb; ++a)
                    for (std::size_t i = 0; i < mb; ++i)
                        if ((a > i ? a - i : i - a) >= k)
                            outside_band = std::max(outside_band, max_abs(Eigen::MatrixXd(d.block(ix(a * n), ix(i * n), ix(n), ix(n)))));
            }
        }
        c.check(additivity < 1e-14, "G_orig = G + dG over all cuts, K=4,5,6: max |err| " + sci(additivity) + " < 1e-14");
        c.check(zero_cut == 0.0, "dG identically zero without truncation: max " + sci(zero_cut));
        c.check(outside_band == 0.0, "blocks with |m-i| >= K are zero (all branch pairs, M=2K+2): max " + sci(outside_band));

        // block formulas of the first truncated row, K = 6, cut (3, 2)
        const PrototypeFilter f = generate_iota(n, 6);
        double block_err = 0.0;
        for (Branch row : {Branch::in_phase, Branch::quadrature})
            for (Branch col : {Branch::in_phase, Branch::quadrature})
            {
                const BlockBandMatrix d = delta_blocks(f, 8, {3, 2}, {row, col});
                // dG_{m,i} = sum over removed front rows r < 3 of W_row[r - m] W_col[r - i]
                // plus the rear rows r >= K + M - 1 - 2
                for (std::size_t a = 0; a < 8; ++a)
                    for (std::size_t i = 0; i < 8; ++i)
                    {
                        Eigen::VectorXd expect = Eigen::VectorXd::Zero(ix(n));
                        for (std::size_t r = 0; r < 6 + 8 - 1; ++r)
                        {
                            if (r >= 3 && r < 6 + 8 - 1 - 2)
                                continue;
                            if (r < a || r < i || r - a >= 6 || r - i >= 6)
                                continue;
                            expect += f.slice(row, r - a).cwiseProduct(f.slice(col, r - i));
                        }
                        block_err = std::max(block_err, max_abs(Eigen::MatrixXd(d.block(a, i) - expect)));
                    }
            }
        c.check(block_err < 1e-15, "dG block formulas at K=6, cut (3,2): max |err| " + sci(block_err));
        const double t = seconds_since(t0);
        c.check(t < 1.0, "runtime " + num(t) + " s < 1 s");
    }

    // ---------------------------------------------------------------------

    void oracle_equivalence(Criterion &c)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n = 8, k = 4;
        const PrototypeFilter f = generate_iota(n, k);
        const Eigen::VectorXd w = f.coeffs();
        double tx_err = 0.0, rx_err = 0.0, kern_err = 0.0, comp_err = 0.0;
        const std::vector<Truncation> cuts{{0, 0}, {1, 1}, {2, 1}, {1, 2}};
        UnitaryDft dft(n);
        for (std::size_t m : {3u, 4u})
            for (const Truncation cut : cuts)
            {
                FbmcConfig cfg;
                cfg.n_subcarriers = n;
                cfg.overlap = k;
                cfg.block_len = m;
                cfg.n_tx = cfg.n_rx = 2;
                cfg.cut = cut;
                const Transceiver trx(cfg, f);
                const SymbolGrid g = random_grid(cfg, 100 + m);
                const BranchGrid b = split_oqam(g);
                const TimeSignal tx = trx.transmit(b);
                tx_err = std::max(tx_err, max_abs(Eigen::MatrixXcd(oracle::interleave_signal(tx) - oracle::transmit(w, cfg, b))));

                Rng rng(m + 7);
                TimeSignal r;
                for (int a = 0; a < 2; ++a)
                {
                    Eigen::VectorXcd v(ix(trx.signal_length()));
                    for (Eigen::Index t = 0; t < v.size(); ++t)
                        v[t] = rng.complex_normal();
                    r.streams.push_back(v);
                }
                const BranchPairSignal y = trx.demodulate(trx.receive_front(r));
                const auto ref = oracle::receive(w, cfg, oracle::interleave_signal(r), 2);
                for (Branch br : {Branch::in_phase, Branch::quadrature})
                    for (std::size_t j = 0; j < 2; ++j)
                        rx_err = std::max(rx_err, max_abs(Eigen::MatrixXcd(y.branch(br, j) - ref[int(br)][j])));

                const std::array<Eigen::VectorXd, 2> taps{w, oracle::q_taps(w, n)};
                const CorrelationSet s = CorrelationSet::build(f, m, cut);
                for (const BranchPair p : all_branch_pairs())
                {
                    const Eigen::MatrixXd pa = oracle::synthesis(taps[int(p.row)], n, k, m, cut);
                    const Eigen::MatrixXd pb = oracle::synthesis(taps[int(p.col)], n, k, m, cut);
                    for (std::size_t a = 0; a < m; ++a)
                        for (std::size_t i = 0; i < m; ++i)
                            kern_err = std::max(kern_err, max_abs(Eigen::MatrixXcd(
                                                              interference_kernel(s.trunc(p).block(a, i), a, i, p.col, dft) -
                                                              oracle::kernel(oracle::gram_block(pa, pb, n, a, i), n, a, i, p.col))));
                }

                if (cut.none())
                    continue;
                CompensationOptions co;
                co.max_condition = std::numeric_limits<double>::infinity();
                const CompensationSet set = CompensationSet::build(f, m, cut, co);
                const MimoChannel ch = identity_channel(2, 2, n);
                const auto eq = build_equalizer(ch.freq, 0.0, 1.0, EqualizerKind::zf);
                const EqualizedGrid u = trx.receive(apply_channel(tx, ch, 0.0, 0), eq);
                BlockCompensationOptions o;
                o.mode = CompensationMode::genie;
                o.truth = &b;
                const SymbolGrid est = compensate_block(u, set, o);
                for (std::size_t j = 0; j < 2; ++j)
                {
                    const std::array<Eigen::MatrixXd, 2> ext{Eigen::MatrixXd(u.in_phase[j].real()), Eigen::MatrixXd(u.quadrature[j].imag())};
                    const std::array<Eigen::MatrixXd, 2> tr{b.stream(Branch::in_phase, j), b.stream(Branch::quadrature, j)};
                    const auto cref = oracle::genie_compensate(w, n, k, m, cut, ext, tr);
                    const Eigen::MatrixXcd sj = est.stream(j);
                    comp_err = std::max({comp_err, max_abs(Eigen::MatrixXd(sj.real() - cref[0])), max_abs(Eigen::MatrixXd(sj.imag() - cref[1]))});
                }
            }
        c.check(tx_err < 1e-10, "synthesis vs Kronecker oracle (N=8, K=4, M=3,4, 2x2): " + sci(tx_err) + " < 1e-10");
        c.check(rx_err < 1e-10, "analysis vs Kronecker oracle: " + sci(rx_err) + " < 1e-10");
        c.check(kern_err < 1e-10, "interference kernels vs dense sandwich: " + sci(kern_err) + " < 1e-10");
        c.check(comp_err < 1e-10, "genie compensation vs dense solve: " + sci(comp_err) + " < 1e-10");

        const MimoChannel ch = draw_channel(epa_profile(30.72e6), 2, 2, 64, 5);
        Rng rng(6);
        TimeSignal x;
        for (int a = 0; a < 2; ++a)
        {
            Eigen::VectorXcd v(400);
            for (Eigen::Index t = 0; t < v.size(); ++t)
                v[t] = rng.complex_normal();
            x.streams.push_back(v);
        }
        const TimeSignal got = apply_channel(x, ch, 0.0, 0), ref = oracle::convolve(x, ch);
        double ch_err = 0.0;
        for (std::size_t r = 0; r < 2; ++r)
            ch_err = std::max(ch_err, max_abs(Eigen::MatrixXcd(got.streams[r] - ref.streams[r])));
        c.check(ch_err < 1e-12, "channel vs triple-loop convolution (EPA at 30.72 MHz): " + sci(ch_err) + " < 1e-12");
        const double t = seconds_since(t0);
        c.check(t < 10.0, "runtime " + num(t) + " s < 10 s");
    }

    // ---------------------------------------------------------------------

    void sir_numbers(Criterion &c)
    {
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n = 64, m = 8, k = 6;
        const PrototypeFilter f = generate_iota(n, k);
        const Truncation same = truncation_case(k, TruncationCase::same_length);
        const SirReport before = sir_table(f, m, same);
        SirOptions so;
        so.compensated = true;
        const SirReport after = sir_table(f, m, same, so);
        const SirRow &b0 = before.at(Branch::in_phase, 0), &a0 = after.at(Branch::in_phase, 0);

        c.check(std::abs(b0.sir_db - 2.0) <= 1.5, "same-length I0 SIR " + num(b0.sir_db, 2) + " dB, target 2 +- 1.5 dB");
        c.check(a0.sir_db >= 40.0, "compensated I0 SIR " + num(a0.sir_db, 2) + " dB, target >= 40 dB");
        c.check(std::abs(b0.signal_db + 5.0) <= 1.0, "I0 signal before compensation " + num(b0.signal_db, 2) + " dB, target -5 +- 1 dB");
        c.check(std::abs(a0.signal_db) <= 1.0, "I0 signal after compensation " + num(a0.signal_db, 2) + " dB, target 0 +- 1 dB");
        double q_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i)
            q_min = std::min(q_min, before.at(Branch::quadrature, i).sir_db);
        c.check(q_min >= 18.0, "same-length Q-branch minimum SIR " + num(q_min, 2) + " dB, target >= 18 dB");
        const SirReport front = sir_table(f, m, truncation_case(k, TruncationCase::one_front));
        c.check(front.worst().sir_db >= 20.0, "one-front minimum SIR " + num(front.worst().sir_db, 2) + " dB, target >= 20 dB");

        // diagnostics: the other compensation variants for the first real symbol
        for (KernelModel km : {KernelModel::truncation, KernelModel::finite_length})
            for (CompensationSolver sv : {CompensationSolver::zf, CompensationSolver::mmse})
            {
                SirOptions o;
                o.compensated = true;
                o.compensation.model = km;
                o.compensation.solver = sv;
                o.compensation.regularization = sv == CompensationSolver::mmse ? 1e-3 : 0.0;
                const SirRow r = sir_table(f, m, same, o).at(Branch::in_phase, 0);
                std::cout << "    info compensated I0 with " << to_string(km) << "/" << to_string(sv)
                          << (sv == CompensationSolver::mmse ? " (lambda 1e-3)" : "") << ": signal " << num(r.signal_db, 2)
                          << " dB, interference " << num(r.interference_db, 2) << " dB, SIR " << num(r.sir_db, 2) << " dB\n";
            }
        std::cout << "    info condition number of the I0 self matrix: "
                  << num(CompensationSet::build(f, m, same, {}).condition(Branch::in_phase, 0), 1) << "\n";
        const double t = seconds_since(t0);
        c.check(t < 30.0, "runtime " + num(t) + " s < 30 s");
    }

    // ---------------------------------------------------------------------

    void odd_even(Criterion &c)
    {
        const std::size_t n = 64, m = 8;
        for (std::size_t k : {5u, 6u})
        {
            const Truncation cut = truncation_case(k, TruncationCase::same_length);
            const SirRow w = sir_table(generate_iota(n, k), m, cut).worst();
            const bool want_q = k % 2 == 1;
            const Branch b = want_q ? Branch::quadrature : Branch::in_phase;
            const std::size_t idx = want_q ? m - 1 : 0;
            c.check(w.branch == b && w.m == idx, "K=" + std::to_string(k) + " cut " + cut_str(cut) + ": minimum SIR at " +
                                                      to_string(w.branch) + std::to_string(w.m) + " (" + num(w.sir_db, 2) +
                                                      " dB), expected " + to_string(b) + std::to_string(idx));
        }
    }

    // ---------------------------------------------------------------------

    std::string curve_text(const std::vector<BerPoint> &pts)
    {
        std::string s;
        for (const BerPoint &p : pts)
            s += " " + num(p.ebn0_db, 0) + ":" + sci(p.ber);
        return s;
    }

    std::string crossing_text(std::optional<double> x) { return x ? num(*x, 2) + " dB" : "none (floor)"; }

    void ber_study(Criterion &c)
    {
        const auto t0 = std::chrono::steady_clock::now();
        ScenarioConfig sc = load_scenario(source_dir / "configs" / "default.ini");
        sc.system.modulation = Modulation::qpsk;
        LinkScenario link = make_link(sc);
        BerSettings s = make_ber_settings(sc);
        s.coded = false;
        s.min_errors = 200;
        s.min_trials = 1000;
        s.max_trials = 20000;
        s.ebn0_db = {0, 4, 8, 12, 16, 20, 24, 28};
        std::cout << "    info N=" << link.system.n_subcarriers << " M=" << link.system.block_len << " K=" << link.system.overlap
                  << " " << link.system.n_tx << "x" << link.system.n_rx << " QPSK uncoded, EPA taps at";
        for (std::size_t d : link.profile.delays)
            std::cout << " " << d;
        std::cout << ", >= " << s.min_errors << " errors and >= " << s.min_trials << " channel draws per point (cap "
                  << s.max_trials << ")\n";

        const double target = 1e-2;
        std::map<BerScheme, std::vector<BerPoint>> curves;
        for (BerScheme b : {BerScheme::use_it_all, BerScheme::same_length, BerScheme::compensated, BerScheme::ofdm})
        {
            curves[b] = ber_curve(link, b, s);
            std::cout << "    info " << to_string(b) << ":" << curve_text(curves[b]) << ", 1e-2 crossing "
                      << crossing_text(crossing_ebn0(curves[b], target)) << "\n";
        }
        const auto ref = crossing_ebn0(curves[BerScheme::use_it_all], target);
        const auto comp = crossing_ebn0(curves[BerScheme::compensated], target);
        const auto same = crossing_ebn0(curves[BerScheme::same_length], target);
        c.check(ref && comp && std::abs(*comp - *ref) <= 0.5,
                "(a) compensated same-length at 1e-2: " + crossing_text(comp) + " vs use-it-all " + crossing_text(ref) + ", target within 0.5 dB");
        c.check(ref && (!same || *same - *ref >= 2.0),
                "(b) uncompensated same-length at 1e-2: " + crossing_text(same) + ", target floor or >= 2 dB penalty");

        // the same comparison with the rate 1/2 code, reported but not gating
        {
            BerSettings sc_coded = s;
            sc_coded.coded = true;
            sc_coded.min_trials = 500;
            sc_coded.ebn0_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 20};
            for (BerScheme b : {BerScheme::use_it_all, BerScheme::same_length, BerScheme::compensated})
            {
                const auto pts = ber_curve(link, b, sc_coded);
                std::cout << "    info coded " << to_string(b) << ":" << curve_text(pts) << ", 1e-2 crossing "
                          << crossing_text(crossing_ebn0(pts, target)) << "\n";
            }
        }

        // (c) 64QAM against the paired CP-OFDM baseline at the highest Eb/N0
        sc.system.modulation = Modulation::qam64;
        link = make_link(sc);
        s.ebn0_db = {10, 20, 30, 40};
        std::map<BerScheme, BerPoint> top;
        for (BerScheme b : {BerScheme::same_length, BerScheme::compensated, BerScheme::ofdm})
        {
            const auto pts = ber_curve(link, b, s);
            top[b] = pts.back();
            std::cout << "    info 64QAM " << to_string(b) << ":" << curve_text(pts) << "\n";
        }
        const BerPoint &o = top[BerScheme::ofdm], &sl = top[BerScheme::same_length], &cp = top[BerScheme::compensated];
        const auto ci = [](const BerPoint &p)
        { return sci(p.ber) + " [" + sci(p.ci_low) + ", " + sci(p.ci_high) + "]"; };
        c.check(sl.ci_low > o.ci_high, "(c) 64QAM at " + num(o.ebn0_db, 0) + " dB: same-length " + ci(sl) +
                                           " worse than OFDM " + ci(o) + " (95% intervals disjoint)");
        c.check(cp.ci_low <= o.ci_high, "(c) 64QAM at " + num(o.ebn0_db, 0) + " dB: compensated " + ci(cp) +
                                            " not worse than OFDM (intervals overlap or below)");
        std::cout << "    info runtime " << num(seconds_since(t0), 1) << " s\n";
    }

    // ---------------------------------------------------------------------

    void spectral(Criterion &c)
    {
        const std::size_t k = 6;
        const double over = payload_overhead(se_alpha(SeScheme::one_front, k), 20);
        c.check(over == 0.05, "one-front overhead at M=20, K=6: alpha/M = " + num(over, 6) + ", exactly 0.05");
        c.check(transmission_efficiency(20, k) == 0.8, "eta(20,6) = 20/25 = " + num(transmission_efficiency(20, k), 6));

        bool payload_one = true;
        for (std::size_t m = 1; m <= 64; ++m)
            payload_one = payload_one && payload_overhead(se_alpha(SeScheme::compensate_all, k), m) == 0.0;
        const std::vector<double> s5(5, 100.0), s20(20, 100.0);
        const double se5 = se_from_sinr(s5, 0, 2), se20 = se_from_sinr(s20, 0, 2);
        c.check(payload_one && se5 == se20, "compensate-all has no overhead for any M; SE at equal SINR, M=5: " + num(se5, 12) +
                                                ", M=20: " + num(se20, 12));

        const PrototypeFilter f = generate_iota(64, k);
        const std::vector<double> grid{0, 5, 10, 15, 20, 25, 30, 35, 40};
        std::size_t violations = 0, tested = 0;
        std::string where;
        for (std::size_t m = 2; m <= 20; m += 2)
        {
            FbmcConfig cfg;
            cfg.n_subcarriers = 64;
            cfg.overlap = k;
            cfg.block_len = m;
            const auto rs = spectral_efficiency(f, cfg, grid);
            const std::size_t g = grid.size();
            for (std::size_t i = 0; i < g; ++i)
            {
                const double ua = rs[i].se, of = rs[g + i].se, ca = rs[2 * g + i].se;
                ++tested;
                if (!(ca >= of && of >= ua))
                {
                    ++violations;
                    std::cout << "    info ordering broken at M=" << m << ", " << num(grid[i], 0) << " dB: compensate_all "
                              << num(ca) << ", one_front " << num(of) << ", use_it_all " << num(ua) << "\n";
                }
            }
            if (m == 2 || m == 20)
                std::cout << "    info M=" << m << " SE at 40 dB: compensate_all " << num(rs[3 * g - 1].se) << ", one_front "
                          << num(rs[2 * g - 1].se) << ", use_it_all " << num(rs[g - 1].se) << " bit/s/Hz\n";
        }
        c.check(violations == 0, "SE(compensate-all) >= SE(one-front) >= SE(use-it-all), M=2..20, 0..40 dB: " +
                                     std::to_string(tested - violations) + "/" + std::to_string(tested) + " hold");
    }

    // ---------------------------------------------------------------------

    std::string run_binary(const std::string &args, int &code)
    {
        const std::string cmd = std::string(FBMCLAB_CLI) + " " + args + " 2>/dev/null";
        std::string out;
        FILE *p = popen(cmd.c_str(), "r");
        if (!p)
        {
            code = -1;
            return out;
        }
        char buf[4096];
        for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, p)) > 0;)
            out.append(buf, got);
        const int st = pclose(p);
        code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
        return out;
    }

    void headless(Criterion &c)
    {
        const std::string cfg = "--config " + (source_dir / "configs" / "smoke.ini").string();
        for (const std::string sub : {"sir --compensate genie", "ber --threads 2", "ofdm", "se"})
        {
            int c1 = 0, c2 = 0;
            const std::string a = run_binary(sub.substr(0, sub.find(' ')) + " " + cfg + sub.substr(std::min(sub.size(), sub.find(' '))), c1);
            const std::string b = run_binary(sub.substr(0, sub.find(' ')) + " " + cfg + sub.substr(std::min(sub.size(), sub.find(' '))), c2);
            c.check(c1 == 0 && c2 == 0 && !a.empty() && a == b,
                    "fbmclab " + sub + ": exit " + std::to_string(c1) + "/" + std::to_string(c2) + ", " + std::to_string(a.size()) +
                        " bytes, consecutive runs " + (a == b ? "identical" : "differ"));
        }
    }
}

int main()
{
    std::cout.setf(std::ios::unitbuf);
    const std::vector<std::pair<Criterion, std::function<void(Criterion &)>>> plan{
        {{"1", "exact algebra"}, exact_algebra},
        {{"2", "oracle equivalence"}, oracle_equivalence},
        {{"3", "SIR numbers at N=64, M=8, K=6"}, sir_numbers},
        {{"4", "odd/even asymmetry"}, odd_even},
        {{"5", "BER study"}, ber_study},
        {{"6", "spectral efficiency"}, spectral},
        {{"7", "headless reproducibility"}, headless},
    };
    int failed = 0;
    for (auto [crit, fn] : plan)
    {
        std::cout << "criterion " << crit.id << ": " << crit.title << "\n";
        try
        {
            fn(crit);
        }
        catch (const std::exception &e)
        {
            crit.check(false, std::string("exception: ") + e.what());
        }
        std::cout << (crit.ok ? "PASS" : "FAIL") << " " << crit.id << " " << crit.title << "\n";
        failed += crit.ok ? 0 : 1;
    }
    std::cout << (7 - failed) << "/7 criteria pass\n";
    return failed;
}
