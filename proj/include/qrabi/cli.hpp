// cli.hpp: command-line surface. Every command emits one table as CSV or JSON
// with numbers at 15 significant digits; output is deterministic apart from a
// timestamp comment line that --no-header suppresses.
//
// Exit codes: 0 success, 2 usage error, 3 numerical-domain error,
// 4 convergence failure.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "qrabi.hpp"

namespace qrabi::cli {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct OutputOptions {
    std::string format = "csv";
    std::string out_path;
    bool no_header = false;
};

struct Table {
    std::string command;
    ordered_json params;
    std::vector<std::string> columns;
    std::vector<std::vector<ordered_json>> rows;
    ordered_json extra;  // additional top-level JSON fields
};

inline std::string timestamp_utc() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline std::string csv_cell(const ordered_json& c) {
    if (c.is_null()) return "";
    if (c.is_string()) return c.get<std::string>();
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_number_float()) return fmt15(c.get<double>());
    return c.dump();
}

inline void write_table(const Table& t, const OutputOptions& oo, std::ostream& os) {
    if (oo.format == "json") {
        ordered_json j;
        j["command"] = t.command;
        if (!oo.no_header) j["generated"] = timestamp_utc();
        if (t.params.is_object()) j["params"] = t.params;
        j["columns"] = t.columns;
        auto rows = ordered_json::array();
        for (const auto& r : t.rows) {
            ordered_json obj;
            for (size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = r[i];
            rows.push_back(std::move(obj));
        }
        j["rows"] = std::move(rows);
        if (t.extra.is_object())
            for (const auto& [k, v] : t.extra.items()) j[k] = v;
        os << j.dump(2) << "\n";
    } else {
        if (!oo.no_header) os << "# generated " << timestamp_utc() << "\n";
        for (size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& r : t.rows) {
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
            os << "\n";
        }
    }
}

inline int emit(const Table& t, const OutputOptions& oo, std::ostream& out,
                std::ostream& err) {
    if (!oo.out_path.empty()) {
        std::ofstream f(oo.out_path);
        if (!f) {
            err << "cannot open output file: " << oo.out_path << "\n";
            return 2;
        }
        write_table(t, oo, f);
    } else {
        write_table(t, oo, out);
    }
    return 0;
}

inline std::string join_semicolon(const std::vector<std::string>& parts) {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) s += (i ? ";" : "") + parts[i];
    return s;
}

namespace detail {

inline bool near_pole(double E, double g, double halfwidth = 1e-4) {
    const double g2 = g * g;
    const double mreal = E + g2;
    const long mr = std::lround(mreal);
    return mr >= 0 && std::abs(mreal - static_cast<double>(mr)) < halfwidth;
}

inline std::vector<double> grid(double lo, double hi, double step) {
    if (!(step > 0) || !(lo <= hi)) throw DomainError("grid: need lo <= hi, step > 0");
    std::vector<double> xs;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) xs.push_back(lo + i * step);
    return xs;
}

inline const char* parity_name(spectrum::Parity p) {
    switch (p) {
        case spectrum::Parity::plus: return "plus";
        case spectrum::Parity::minus: return "minus";
        default: return "none";
    }
}

} // namespace detail

inline Table cmd_hc(const heun::HeunParams& p, double xmin, double xmax, double xstep,
                    const heun::HcOptions& opt) {
    Table t;
    t.command = "hc";
    t.params = {{"alpha", p.alpha}, {"beta", p.beta},   {"gamma", p.gamma},
                {"delta", p.delta}, {"eta", p.eta},     {"tol", opt.tol},
                {"nmax", opt.n_max}};
    t.columns = {"x", "value", "derivative", "n_terms"};
    for (double x : detail::grid(xmin, xmax, xstep)) {
        const auto e = heun::hc_eval(p, x, opt);
        t.rows.push_back({x, e.value, e.derivative, e.n_terms});
    }
    return t;
}

inline Table cmd_conditions(const rabi::ModelParams& m, double emin, double emax,
                            double estep, const std::vector<double>& z_list) {
    static const char* names[] = {"G1p", "G2p", "G3p", "G4p", "G1m",
                                  "G2m", "G3m", "G4m", "Kp",  "Km"};
    Table t;
    t.command = "conditions";
    t.params = {{"delta", m.delta}, {"g", m.g},       {"emin", emin},
                {"emax", emax},     {"estep", estep}};
    t.columns = {"z", "E"};
    t.columns.insert(t.columns.end(), std::begin(names), std::end(names));
    t.columns.push_back("skipped");
    t.columns.push_back("sign_changes");
    for (double z : z_list) {
        std::vector<double> prev;
        for (double E : detail::grid(emin, emax, estep)) {
            std::vector<ordered_json> row = {z, E};
            if (detail::near_pole(E, m.g)) {
                for (size_t i = 0; i < std::size(names); ++i) row.push_back(nullptr);
                row.push_back(1);
                row.push_back("");
                t.rows.push_back(std::move(row));
                continue;
            }
            std::vector<double> vals;
            for (int i = 1; i <= 4; ++i)
                vals.push_back(rabi::eval_G(rabi::Family::plus, i, E, z, m));
            for (int i = 1; i <= 4; ++i)
                vals.push_back(rabi::eval_G(rabi::Family::minus, i, E, z, m));
            vals.push_back(rabi::eval_K(rabi::Family::plus, E, z, m));
            vals.push_back(rabi::eval_K(rabi::Family::minus, E, z, m));
            std::vector<std::string> flips;
            // only the G columns carry spectral sign changes; K is identically
            // zero and its sign is roundoff noise
            if (!prev.empty())
                for (size_t i = 0; i < 8; ++i)
                    if (prev[i] * vals[i] < 0) flips.push_back(names[i]);
            for (double v : vals) row.push_back(v);
            row.push_back(0);
            row.push_back(join_semicolon(flips));
            t.rows.push_back(std::move(row));
            prev = std::move(vals);
        }
    }
    return t;
}

inline Table cmd_wronskian(const rabi::ModelParams& m, double emin, double emax,
                           double estep, const std::vector<double>& z_list) {
    Table t;
    t.command = "wronskian";
    t.params = {{"delta", m.delta}, {"g", m.g},       {"emin", emin},
                {"emax", emax},     {"estep", estep}};
    t.columns = {"z", "E", "W1", "skipped"};
    for (double z : z_list)
        for (double E : detail::grid(emin, emax, estep)) {
            if (detail::near_pole(E, m.g))
                t.rows.push_back({z, E, nullptr, 1});
            else
                t.rows.push_back({z, E, rabi::wronskian(1, E, z, m), 0});
        }
    return t;
}

inline Table cmd_spectrum(const rabi::ModelParams& m, double emin, double emax,
                          const spectrum::ScanOptions& opts) {
    const auto res = spectrum::compute_spectrum(m, emin, emax, opts);
    Table t;
    t.command = "spectrum";
    t.params = {{"delta", m.delta},       {"g", m.g},
                {"emin", emin},           {"emax", emax},
                {"estep", opts.e_step},   {"refine_tol", opts.refine_tol}};
    t.columns = {"energy", "source", "parity", "classification", "multiplicity",
                 "z_values"};
    for (const auto& r : res.records) {
        std::vector<std::string> zs;
        for (double z : r.z_values) zs.push_back(fmt15(z));
        t.rows.push_back({r.energy, spectrum::source_name(r.source),
                          detail::parity_name(r.parity),
                          r.classification == spectrum::Classification::exceptional
                              ? "exceptional"
                              : "regular",
                          r.multiplicity, join_semicolon(zs)});
    }
    ordered_json extra;
    extra["discarded"] = res.discarded;
    auto skipped = ordered_json::array();
    for (const auto& [lo, hi] : res.skipped_windows) skipped.push_back({lo, hi});
    extra["skipped_windows"] = std::move(skipped);
    t.extra = std::move(extra);
    return t;
}

inline Table cmd_judd(int n1, double gmin, double gmax, double gstep) {
    Table t;
    t.command = "judd";
    t.params = {{"n1", n1}, {"gmin", gmin}, {"gmax", gmax}, {"gstep", gstep}};
    t.columns = {"g", "energy", "n_roots", "deltas"};
    for (double g : detail::grid(gmin, gmax, gstep)) {
        const auto deltas = judd::solve_judd_delta(n1, g);
        std::vector<std::string> ds;
        for (double d : deltas) ds.push_back(fmt15(d));
        t.rows.push_back({g, n1 - g * g, static_cast<int>(deltas.size()),
                          join_semicolon(ds)});
    }
    return t;
}

inline Table cmd_oracle(const rabi::ModelParams& m, int n_max, double tol) {
    const auto s = oracle::diagonalize(m, n_max, tol);
    Table t;
    t.command = "oracle";
    t.params = {{"delta", m.delta}, {"g", m.g}, {"nmax", n_max}, {"tol", tol}};
    t.columns = {"index", "energy", "parity", "parity_expect", "converged"};
    for (size_t k = 0; k < s.energies.size(); ++k)
        t.rows.push_back({static_cast<int>(k), s.energies[k], s.parities[k],
                          s.parity_expect[k],
                          static_cast<int>(k) < s.converged_count ? 1 : 0});
    t.extra = ordered_json{{"converged_count", s.converged_count}};
    return t;
}

// Analytic records against oracle levels. States are composed at the oracle
// eigenvalue (the energy whose precision the Fock tail can support) and
// compared against the matching eigenvector or degenerate subspace.
inline Table cmd_compare(const rabi::ModelParams& m, double emin, double emax,
                         spectrum::ScanOptions opts, int state_n_max = 16,
                         double state_tail_tol = 1e-5) {
    const auto res = spectrum::compute_spectrum(m, emin, emax, opts);
    const auto orc = oracle::diagonalize(m, opts.oracle_n_max, opts.oracle_tol);

    Table t;
    t.command = "compare";
    t.params = {{"delta", m.delta}, {"g", m.g}, {"emin", emin}, {"emax", emax}};
    t.columns = {"energy_analytic", "energy_oracle", "abs_diff", "parity",
                 "classification", "overlap"};
    for (const auto& r : res.records) {
        int k_best = -1;
        double d_best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < orc.converged_count; ++k) {
            const double d = std::abs(orc.energies[k] - r.energy);
            if (d < d_best) {
                d_best = d;
                k_best = k;
            }
        }
        ordered_json e_oracle, diff, ov;
        if (k_best >= 0) {
            e_oracle = orc.energies[k_best];
            diff = d_best;
            if (r.classification == spectrum::Classification::exceptional) {
                const int n1 = static_cast<int>(std::lround(r.energy + m.g * m.g));
                int lo = k_best, hi = k_best + 1;
                while (lo > 0 && std::abs(orc.energies[lo - 1] - orc.energies[k_best])
                                     < 1e-6 * std::max(1.0, std::abs(r.energy)))
                    --lo;
                while (hi < orc.converged_count
                       && std::abs(orc.energies[hi] - orc.energies[k_best])
                             < 1e-6 * std::max(1.0, std::abs(r.energy)))
                    ++hi;
                try {
                    const auto rep = judd::judd_state(n1, m);
                    ov = oracle::subspace_overlap(rep.state1, orc, lo, hi);
                } catch (const DomainError&) {
                    ov = nullptr;
                }
            } else {
                const auto target = oracle::eigenvector_state(orc, k_best);
                double best = -1;
                // The optimal truncation shifts with coupling and photon
                // occupation, so try a short ladder and keep the best fit.
                for (int nm = 8; nm <= state_n_max + 12; nm += 4)
                    for (auto kind :
                         {rabi::PairKind::symmetric, rabi::PairKind::antisymmetric}) {
                        try {
                            const auto st = rabi::state_coefficients(
                                kind, orc.energies[k_best], m, nm, state_tail_tol);
                            best = std::max(best, oracle::overlap(st, target));
                        } catch (const TruncationError&) {
                            // wrong-parity combination vanishes identically; skip
                        }
                    }
                ov = best >= 0 ? ordered_json(best) : ordered_json(nullptr);
            }
        }
        t.rows.push_back({r.energy, e_oracle, diff, detail::parity_name(r.parity),
                          r.classification == spectrum::Classification::exceptional
                              ? "exceptional"
                              : "regular",
                          ov});
    }
    return t;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"quantum Rabi model spectrum toolkit"};
    app.require_subcommand(1);

    OutputOptions oo;
    rabi::ModelParams m{0.7, 0.8};
    double emin = -1, emax = 6, estep = 0.01;
    std::vector<double> z_list;
    double tol = 0;
    int n_max = 0;

    const auto add_output = [&](CLI::App* c) {
        c->add_option("--format", oo.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--out", oo.out_path, "write to file instead of stdout");
        c->add_flag("--no-header", oo.no_header, "suppress the timestamp line");
    };
    const auto add_model = [&](CLI::App* c) {
        c->add_option("--delta", m.delta, "level splitting");
        c->add_option("--g", m.g, "coupling");
    };
    const auto add_window = [&](CLI::App* c) {
        c->add_option("--emin", emin, "window start");
        c->add_option("--emax", emax, "window end");
        c->add_option("--estep", estep, "grid step");
    };
    const auto add_z = [&](CLI::App* c) {
        c->add_option("--z", z_list, "z values")->delimiter(',');
    };

    auto* hc = app.add_subcommand("hc", "evaluate the series on an x grid");
    heun::HeunParams hp;
    double xmin = 0, xmax = 0.9, xstep = 0.1;
    hc->add_option("--alpha", hp.alpha)->required();
    hc->add_option("--beta", hp.beta)->required();
    hc->add_option("--gamma", hp.gamma)->required();
    hc->add_option("--delta", hp.delta)->required();
    hc->add_option("--eta", hp.eta)->required();
    hc->add_option("--xmin", xmin);
    hc->add_option("--xmax", xmax);
    hc->add_option("--xstep", xstep);
    hc->add_option("--tol", tol);
    hc->add_option("--nmax", n_max);
    add_output(hc);

    auto* conditions =
        app.add_subcommand("conditions", "condition-function values on an E grid");
    add_model(conditions);
    add_window(conditions);
    add_z(conditions);
    add_output(conditions);

    auto* spectrumc = app.add_subcommand("spectrum", "locate eigenvalues");
    add_model(spectrumc);
    add_window(spectrumc);
    add_z(spectrumc);
    spectrumc->add_option("--nmax", n_max, "oracle truncation");
    spectrumc->add_option("--tol", tol, "root refinement tolerance");
    add_output(spectrumc);

    auto* juddc = app.add_subcommand("judd", "exceptional-point curves over g");
    int n1 = 1;
    double gmin = 0.1, gmax = 0.5, gstep = 0.05;
    juddc->add_option("--n1", n1)->required();
    juddc->add_option("--gmin", gmin);
    juddc->add_option("--gmax", gmax);
    juddc->add_option("--gstep", gstep);
    add_output(juddc);

    auto* wronskianc = app.add_subcommand("wronskian", "W1 values on an E grid");
    add_model(wronskianc);
    add_window(wronskianc);
    add_z(wronskianc);
    add_output(wronskianc);

    auto* oraclec = app.add_subcommand("oracle", "diagonalization ground truth");
    add_model(oraclec);
    oraclec->add_option("--nmax", n_max, "truncation");
    oraclec->add_option("--tol", tol, "doubling-stability tolerance");
    add_output(oraclec);

    auto* comparec = app.add_subcommand("compare", "analytic spectrum vs oracle");
    add_model(comparec);
    add_window(comparec);
    add_z(comparec);
    comparec->add_option("--nmax", n_max, "oracle truncation");
    comparec->add_option("--tol", tol, "root refinement tolerance");
    add_output(comparec);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        Table t;
        if (hc->parsed()) {
            heun::HcOptions opt;
            if (tol > 0) opt.tol = tol;
            if (n_max > 0) opt.n_max = n_max;
            t = cmd_hc(hp, xmin, xmax, xstep, opt);
        } else if (conditions->parsed()) {
            if (z_list.empty()) z_list = {0.0, 0.375 * m.g};
            t = cmd_conditions(m, emin, emax, estep, z_list);
        } else if (spectrumc->parsed()) {
            spectrum::ScanOptions opts;
            opts.e_step = estep;
            opts.z_values = z_list;
            if (tol > 0) opts.refine_tol = tol;
            if (n_max > 0) opts.oracle_n_max = n_max;
            t = cmd_spectrum(m, emin, emax, opts);
        } else if (juddc->parsed()) {
            t = cmd_judd(n1, gmin, gmax, gstep);
        } else if (wronskianc->parsed()) {
            if (z_list.empty()) z_list = {0.0};
            t = cmd_wronskian(m, emin, emax, estep, z_list);
        } else if (oraclec->parsed()) {
            t = cmd_oracle(m, n_max > 0 ? n_max : 80, tol > 0 ? tol : 1e-8);
        } else {
            spectrum::ScanOptions opts;
            opts.e_step = estep;
            opts.z_values = z_list;
            if (tol > 0) opts.refine_tol = tol;
            if (n_max > 0) opts.oracle_n_max = n_max;
            t = cmd_compare(m, emin, emax, opts);
        }
        return emit(t, oo, out, err);
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const ConvergenceError& e) {
        err << "convergence failure: " << e.what() << "\n";
        return 4;
    }
}

} // namespace qrabi::cli
