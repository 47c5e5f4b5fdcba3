// spectrum.hpp: eigenvalue extraction. Scan the spectral condition functions
// over a window in E, bracket sign changes away from the series-pole
// baselines E = m - g^2, refine by bisection, keep only roots stable across
// several z values, attach exceptional points, and label parity against the
// diagonalization oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "judd.hpp"
#include "oracle.hpp"
#include "rabi.hpp"

namespace qrabi::spectrum {

enum class CondSource { G12plus, G34plus, G12minus, G34minus, W1, Kplus, Kminus, Judd };
enum class Parity { plus, minus, none };
enum class Classification { regular, exceptional };

struct RootRecord {
    double energy = 0;
    CondSource source = CondSource::W1;
    std::vector<double> z_values;  // z at which the root was confirmed
    Parity parity = Parity::none;
    Classification classification = Classification::regular;
    int multiplicity = 1;
};

struct ScanOptions {
    double e_step = 0.01;
    std::vector<double> z_values;   // empty -> {0, 0.375 g}
    double refine_tol = 1e-10;
    double pole_halfwidth = 1e-4;
    double cross_tol = 1e-8;        // max drift of a root between z values
    double merge_tol = 1e-7;        // degeneracy merging
    int oracle_n_max = 80;
    double oracle_tol = 1e-8;
    bool use_oracle = true;
    double judd_residual_tol = 1e-9;
    int heun_n_max = 500;
    double heun_tol = 1e-12;
};

struct SpectrumResult {
    std::vector<RootRecord> records;
    rabi::ModelParams params;
    double e_min = 0, e_max = 0;
    ScanOptions settings;
    std::vector<double> discarded;                       // failed cross-validation
    std::vector<std::pair<double, double>> skipped_windows;  // pole exclusions
};

struct Bracket {
    double lo = 0, hi = 0;
};

struct ScanOutcome {
    std::vector<Bracket> brackets;
    std::vector<std::pair<double, double>> skipped;
};

using CondFn = std::function<double(double)>;

inline const char* source_name(CondSource s) {
    switch (s) {
        case CondSource::G12plus: return "G12+";
        case CondSource::G34plus: return "G34+";
        case CondSource::G12minus: return "G12-";
        case CondSource::G34minus: return "G34-";
        case CondSource::W1: return "W1";
        case CondSource::Kplus: return "K+";
        case CondSource::Kminus: return "K-";
        default: return "Judd";
    }
}

// The representative function scanned for each source family (the partner
// index shares its roots, which is verified at test level, not rescanned).
inline CondFn make_condition(CondSource src, double z, const rabi::ModelParams& m) {
    switch (src) {
        case CondSource::G12plus:
            return [z, m](double E) { return rabi::eval_G(rabi::Family::plus, 1, E, z, m); };
        case CondSource::G34plus:
            return [z, m](double E) { return rabi::eval_G(rabi::Family::plus, 3, E, z, m); };
        case CondSource::G12minus:
            return [z, m](double E) { return rabi::eval_G(rabi::Family::minus, 1, E, z, m); };
        case CondSource::G34minus:
            return [z, m](double E) { return rabi::eval_G(rabi::Family::minus, 3, E, z, m); };
        case CondSource::W1:
            return [z, m](double E) { return rabi::wronskian(1, E, z, m); };
        case CondSource::Kplus:
            return [z, m](double E) { return rabi::eval_K(rabi::Family::plus, E, z, m); };
        case CondSource::Kminus:
            return [z, m](double E) { return rabi::eval_K(rabi::Family::minus, E, z, m); };
        default:
            throw DomainError("make_condition: Judd source is not a scannable function");
    }
}

// Series-pole baselines E = m - g^2 (m = 0, 1, 2, ...) overlapping the window,
// with a one-level margin on both sides.
inline std::vector<double> pole_baselines(double g, double e_min, double e_max) {
    std::vector<double> out;
    const double g2 = g * g;
    for (int mm = std::max(0, static_cast<int>(std::floor(e_min + g2)) - 1);; ++mm) {
        const double p = mm - g2;
        if (p > e_max + 1) break;
        out.push_back(p);
    }
    return out;
}

// Walk the grid, skipping excluded pole windows, and bracket sign changes
// between adjacent valid grid points with no pole in between.
inline ScanOutcome scan_brackets(const CondFn& cond, double e_min, double e_max,
                                 double step, double g, double pole_halfwidth = 1e-4) {
    if (!(step > 0) || !(e_min < e_max) || !std::isfinite(e_min) || !std::isfinite(e_max))
        throw DomainError("scan_brackets: need finite e_min < e_max and step > 0");
    const auto poles = pole_baselines(g, e_min, e_max);

    ScanOutcome out;
    for (double p : poles)
        if (p + pole_halfwidth > e_min && p - pole_halfwidth < e_max)
            out.skipped.emplace_back(p - pole_halfwidth, p + pole_halfwidth);

    const auto excluded = [&](double E) {
        for (double p : poles)
            if (std::abs(E - p) < pole_halfwidth) return true;
        return false;
    };
    const auto pole_inside = [&](double a, double b) {
        for (double p : poles)
            if (a < p && p < b) return true;
        return false;
    };

    const int n_cells = static_cast<int>(std::ceil((e_max - e_min) / step - 1e-9));
    bool have_prev = false;
    double e_prev = 0, f_prev = 0;
    for (int k = 0; k <= n_cells; ++k) {
        const double E = std::min(e_min + k * step, e_max);
        if (excluded(E)) {
            have_prev = false;
            continue;
        }
        const double f = cond(E);
        if (have_prev && !pole_inside(e_prev, E) && f_prev * f < 0)
            out.brackets.push_back({e_prev, E});
        have_prev = true;
        e_prev = E;
        f_prev = f;
    }
    return out;
}

// Plain bisection: derivative-free and immune to the flat tails the condition
// functions develop between roots.
inline double refine_root(const CondFn& cond, Bracket b, double tol = 1e-10) {
    if (!(b.lo <= b.hi) || !(tol > 0)) throw DomainError("refine_root: bad bracket/tol");
    double lo = b.lo, hi = b.hi;
    double flo, fhi;
    try {
        flo = cond(lo);
        fhi = cond(hi);
    } catch (const DomainError&) {
        throw LostBracket("refine_root: condition undefined at a bracket endpoint");
    }
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if (flo * fhi > 0) throw LostBracket("refine_root: no sign change in bracket");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        double fm;
        try {
            fm = cond(mid);
        } catch (const DomainError&) {
            throw LostBracket("refine_root: condition undefined inside bracket");
        }
        if (fm == 0) return mid;
        if (flo * fm < 0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

struct CrossValidation {
    std::vector<double> kept;       // averaged over the matched z copies
    std::vector<double> discarded;  // present at some z but not all
};

// Keep only roots present (within tol) in every per-z list.
inline CrossValidation cross_validate(
    const std::vector<std::pair<double, std::vector<double>>>& roots_by_z, double tol) {
    if (roots_by_z.size() < 2)
        throw DomainError("cross_validate: need roots from at least 2 z values");
    CrossValidation out;
    const auto& ref = roots_by_z.front().second;
    std::vector<std::vector<bool>> used(roots_by_z.size());
    for (size_t i = 0; i < roots_by_z.size(); ++i)
        used[i].assign(roots_by_z[i].second.size(), false);

    for (size_t j = 0; j < ref.size(); ++j) {
        double sum = ref[j];
        std::vector<size_t> match(roots_by_z.size(), 0);
        bool ok = true;
        for (size_t i = 1; i < roots_by_z.size() && ok; ++i) {
            const auto& lst = roots_by_z[i].second;
            ok = false;
            for (size_t k = 0; k < lst.size(); ++k) {
                if (!used[i][k] && std::abs(lst[k] - ref[j]) < tol) {
                    match[i] = k;
                    sum += lst[k];
                    ok = true;
                    break;
                }
            }
        }
        if (ok) {
            used[0][j] = true;
            for (size_t i = 1; i < roots_by_z.size(); ++i) used[i][match[i]] = true;
            out.kept.push_back(sum / static_cast<double>(roots_by_z.size()));
        }
    }
    for (size_t i = 0; i < roots_by_z.size(); ++i)
        for (size_t k = 0; k < used[i].size(); ++k)
            if (!used[i][k]) out.discarded.push_back(roots_by_z[i].second[k]);
    return out;
}

inline SpectrumResult compute_spectrum(const rabi::ModelParams& m, double e_min,
                                       double e_max, ScanOptions opts = {}) {
    rabi::check(m);
    if (!(e_min < e_max)) throw DomainError("compute_spectrum: need e_min < e_max");
    if (opts.z_values.empty()) opts.z_values = {0.0, 0.375 * m.g};
    for (double z : opts.z_values) rabi::check_z(z, m);

    SpectrumResult res;
    res.params = m;
    res.e_min = e_min;
    res.e_max = e_max;
    res.settings = opts;

    std::optional<oracle::OracleSpectrum> orc;
    if (opts.use_oracle) {
        try {
            orc = oracle::diagonalize(m, opts.oracle_n_max, opts.oracle_tol);
        } catch (const ConvergenceError&) {
            orc.reset();  // parity labels downgrade to none
        }
    }

    const CondSource families[] = {CondSource::G12plus, CondSource::G34plus,
                                   CondSource::G12minus, CondSource::G34minus,
                                   CondSource::W1};
    std::vector<RootRecord> candidates;
    for (CondSource src : families) {
        std::vector<std::pair<double, std::vector<double>>> roots_by_z;
        for (double z : opts.z_values) {
            const auto cond = make_condition(src, z, m);
            const auto scan =
                scan_brackets(cond, e_min, e_max, opts.e_step, m.g, opts.pole_halfwidth);
            if (res.skipped_windows.empty()) res.skipped_windows = scan.skipped;
            std::vector<double> roots;
            for (const auto& b : scan.brackets)
                roots.push_back(refine_root(cond, b, opts.refine_tol));
            roots_by_z.emplace_back(z, std::move(roots));
        }
        auto cv = cross_validate(roots_by_z, opts.cross_tol);
        for (double e : cv.kept) {
            RootRecord r;
            r.energy = e;
            r.source = src;
            r.z_values = opts.z_values;
            candidates.push_back(std::move(r));
        }
        res.discarded.insert(res.discarded.end(), cv.discarded.begin(), cv.discarded.end());
    }

    // Merge coincident roots found by different condition families; the scan
    // order above fixes which source a merged record reports.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const RootRecord& a, const RootRecord& b) {
                         return a.energy < b.energy;
                     });
    for (size_t i = 0; i < candidates.size();) {
        size_t j = i + 1;
        double sum = candidates[i].energy;
        size_t best = i;
        while (j < candidates.size()
               && candidates[j].energy - candidates[j - 1].energy < opts.merge_tol) {
            sum += candidates[j].energy;
            if (candidates[j].source < candidates[best].source) best = j;
            ++j;
        }
        RootRecord merged = candidates[best];
        merged.energy = sum / static_cast<double>(j - i);
        if (orc) {
            double d_best = std::numeric_limits<double>::infinity();
            int k_best = -1;
            for (int k = 0; k < orc->converged_count; ++k) {
                const double d = std::abs(orc->energies[k] - merged.energy);
                if (d < d_best) {
                    d_best = d;
                    k_best = k;
                }
            }
            if (k_best >= 0)
                merged.parity = orc->parities[k_best] > 0 ? Parity::plus : Parity::minus;
        }
        res.records.push_back(std::move(merged));
        i = j;
    }

    for (const auto& jp :
         judd::points_in_window(m, e_min, e_max, opts.judd_residual_tol)) {
        RootRecord r;
        r.energy = jp.energy;
        r.source = CondSource::Judd;
        r.classification = Classification::exceptional;
        r.multiplicity = 2;
        res.records.push_back(std::move(r));
    }
    std::stable_sort(res.records.begin(), res.records.end(),
                     [](const RootRecord& a, const RootRecord& b) {
                         return a.energy < b.energy;
                     });
    return res;
}

} // namespace qrabi::spectrum
