// phxc command line front end: CSV-producing driver for the solver library.
//
// Subcommands:
//   compute      one cell, one row per requested method
//   sweep        concentration sweep over centered square rods (side sqrt(f)*T)
//   convergence  truncation study against a reference value
//   compare      like compute, plus a relative-gap column against a reference
#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "phxc/cell.hpp"
#include "phxc/cellfile.hpp"
#include "phxc/elastic3d.hpp"
#include "phxc/fd.hpp"
#include "phxc/mm.hpp"
#include "phxc/pwe.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Options {
    std::string cell_path;
    std::vector<std::string> methods{"mm"};
    int N = 8;
    int G = 16;
    int grid = 256;
    int N2 = 2, N3 = 2;
    std::string f_range;  // a:b:steps
    std::string out_path;
    std::string inverse_rule = "laurent";
    int workers = 1;
};

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

phxc::MmOptions mm_options(const Options& o) {
    phxc::MmOptions m;
    m.N = o.N;
    m.inverse_rule = o.inverse_rule == "direct" ? phxc::InverseRule::direct
                                               : phxc::InverseRule::laurent;
    return m;
}

void emit(const Options& o, const std::vector<std::string>& lines) {
    for (const auto& l : lines) std::cout << l << "\n";
    if (!o.out_path.empty()) {
        std::ofstream out(o.out_path);
        if (!out) throw std::runtime_error("cannot write " + o.out_path);
        for (const auto& l : lines) out << l << "\n";
    }
}

// Run f(0..tasks-1) on a small worker pool; tasks must be independent.
template <class F>
void run_parallel(int workers, int tasks, F f) {
    workers = std::clamp(workers, 1, tasks);
    if (workers <= 1) {
        for (int i = 0; i < tasks; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < tasks;) f(i);
        });
    for (auto& t : pool) t.join();
}

const phxc::UnitCell& cell2_of(const phxc::CellFile& cf) {
    if (!cf.cell2)
        throw std::runtime_error("this operation needs a 2D cell file");
    return *cf.cell2;
}

// One row of the compute/compare table; empty strings stay empty in CSV.
struct ComputeRow {
    std::string method;
    int trunc = 0;
    std::string M11, M22, M12, c1, c2;
    double rho_avg = 0, mu_avg = 0;
    double ms = 0;
    double c_for_gap = 0;  // used by compare
};

ComputeRow run_method(const std::string& method, const phxc::CellFile& cf,
                      const Options& o) {
    ComputeRow row;
    row.method = method;
    const auto t0 = Clock::now();
    if (method == "mm" || method == "pwe" || method == "oracle") {
        const phxc::UnitCell& cell = cell2_of(cf);
        phxc::EffectiveTensor t;
        if (method == "mm")
            t = phxc::effective_tensor(cell, mm_options(o));
        else if (method == "pwe")
            t = phxc::pwe_effective_tensor(cell, o.G);
        else
            t = phxc::oracle_effective_tensor(cell, o.grid);
        row.trunc = t.trunc;
        row.M11 = num(t.M11);
        row.M22 = num(t.M22);
        row.M12 = num(t.M12);
        row.c1 = num(t.c1());
        row.c2 = num(t.c2());
        row.rho_avg = t.rho_avg;
        row.mu_avg = t.mu_avg;
        row.c_for_gap = t.c1();
    } else if (method == "estimate") {
        const phxc::UnitCell& cell = cell2_of(cf);
        const auto [rho, mu] = phxc::cell_averages(cell);
        const double c = phxc::closed_form_estimate(cell);
        row.trunc = 0;
        row.M11 = row.M22 = num(mu - c * c * rho);
        row.c1 = row.c2 = num(c);
        row.rho_avg = rho;
        row.mu_avg = mu;
        row.c_for_gap = c;
    } else if (method == "elastic3d") {
        if (!cf.cell3)
            throw std::runtime_error("elastic3d needs a 3D cell file");
        const Eigen::Vector3d sp =
            phxc::principal_speeds_3d(*cf.cell3, o.N2, o.N3, 1);
        row.trunc = (2 * o.N2 + 1) * (2 * o.N3 + 1);
        row.c1 = num(sp(0));
        row.c2 = num(sp(1));
        row.rho_avg = cf.cell3->rho_mean();
        row.c_for_gap = sp(0);
    } else {
        throw std::runtime_error("unknown method '" + method + "'");
    }
    row.ms = elapsed_ms(t0);
    return row;
}

std::string compute_csv_line(const ComputeRow& r) {
    std::ostringstream s;
    s << r.method << ',' << r.trunc << ',' << r.M11 << ',' << r.M22 << ','
      << r.M12 << ',' << r.c1 << ',' << r.c2 << ',' << num(r.rho_avg) << ','
      << (r.mu_avg > 0 ? num(r.mu_avg) : std::string()) << ','
      << num(r.ms);
    return s.str();
}

int cmd_compute(const Options& o, bool with_gap) {
    const phxc::CellFile cf = phxc::load_cell_file(o.cell_path);
    std::vector<ComputeRow> rows;
    int failures = 0;
    for (const auto& m : o.methods) {
        try {
            rows.push_back(run_method(m, cf, o));
        } catch (const std::exception& e) {
            std::cerr << m << ": " << e.what() << "\n";
            ++failures;
        }
    }
    std::vector<std::string> lines;
    std::string header =
        "method,truncation,M11,M22,M12,c_k1,c_k2,rho_avg,mu_avg,wall_time_ms";
    double ref = 0.0;
    if (with_gap) {
        header += ",rel_gap";
        // gap is measured against the oracle when present, else the mm row
        for (const auto& r : rows)
            if (r.method == "oracle") ref = r.c_for_gap;
        if (ref == 0.0)
            for (const auto& r : rows)
                if (r.method == "mm") ref = r.c_for_gap;
        if (ref == 0.0 && !rows.empty()) ref = rows.front().c_for_gap;
    }
    lines.push_back(header);
    for (const auto& r : rows) {
        std::string l = compute_csv_line(r);
        if (with_gap) l += "," + num(std::abs(r.c_for_gap - ref) / ref);
        lines.push_back(l);
    }
    emit(o, lines);
    return failures == 0 ? 0 : 1;
}

struct SweepTask {
    double f;
    std::string method;
};

int cmd_sweep(const Options& o) {
    const phxc::CellFile cf = phxc::load_cell_file(o.cell_path);
    const phxc::UnitCell& base = cell2_of(cf);
    if (!base.square())
        throw std::runtime_error("sweep needs a square cell");
    if (base.inclusions().empty())
        throw std::runtime_error(
            "sweep needs an inclusion to define the rod phase");
    const phxc::MaterialPhase matrix = base.background();
    const phxc::MaterialPhase rod = base.inclusions().front().phase;
    const double T = base.period(1);

    double a = 0, b = 1;
    int steps = 2;
    if (!o.f_range.empty()) {
        char c1, c2;
        std::istringstream s(o.f_range);
        if (!(s >> a >> c1 >> b >> c2 >> steps) || c1 != ':' || c2 != ':' ||
            !s.eof())
            throw std::runtime_error("--f-range must be a:b:steps");
    }
    if (steps < 1 || a < 0 || b > 1 || b < a)
        throw std::runtime_error("f range must satisfy 0 <= a <= b <= 1, steps >= 1");

    std::vector<SweepTask> tasks;
    for (int i = 0; i < steps; ++i) {
        const double f = steps == 1 ? a : a + (b - a) * i / (steps - 1);
        for (const auto& m : o.methods) tasks.push_back({f, m});
    }

    std::vector<std::string> rows(tasks.size());
    run_parallel(o.workers, static_cast<int>(tasks.size()), [&](int i) {
        const auto& [f, method] = tasks[i];
        std::string note;
        double side = std::sqrt(f) * T;
        if (side > T - 1e-12 * T && f < 1.0) {
            side = T;
            note = "clamped";
        }
        std::vector<phxc::Inclusion> incs;
        if (f > 0.0)
            incs.push_back({{(T - side) / 2, (T - side) / 2}, {side, side}, rod});
        const phxc::UnitCell cell = phxc::build_cell(T, T, matrix, incs);
        const auto [lo, hi] = phxc::speed_bounds(cell);

        int d = 1;
        std::string cval;
        try {
            if (method == "mm") {
                d = 2 * o.N + 1;
                cval = num(phxc::principal_speed(cell, mm_options(o), 1).c);
            } else if (method == "pwe") {
                d = 2 * o.G + 1;
                cval = num(phxc::pwe_effective_tensor(cell, o.G).c1());
            } else if (method == "estimate") {
                cval = num(phxc::closed_form_estimate(cell));
            } else if (method == "oracle") {
                d = o.grid;
                cval = num(phxc::oracle_effective_tensor(cell, o.grid).c1());
            } else {
                throw std::runtime_error("unknown method '" + method + "'");
            }
        } catch (const std::exception& e) {
            note = std::string("error: ") + e.what();
        }
        std::ostringstream s;
        s << num(f) << ',' << method << ',' << d << ',' << cval << ','
          << num(lo) << ',' << num(hi) << ',' << note;
        rows[i] = s.str();
    });

    // deterministic order regardless of worker count
    std::vector<std::pair<SweepTask, std::string>> keyed;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        keyed.emplace_back(tasks[i], rows[i]);
    std::stable_sort(keyed.begin(), keyed.end(), [](auto& x, auto& y) {
        return std::tie(x.first.f, x.first.method) <
               std::tie(y.first.f, y.first.method);
    });
    std::vector<std::string> lines{"f,method,d,c,c_reuss,c_voigt,note"};
    for (auto& [t, r] : keyed) lines.push_back(r);
    emit(o, lines);
    return 0;
}

std::vector<int> doubling(int from, int limit) {
    std::vector<int> v;
    for (int x = from; x < limit; x *= 2) v.push_back(x);
    if (v.empty() || v.back() != limit) v.push_back(limit);
    return v;
}

int cmd_convergence(const Options& o) {
    const phxc::CellFile cf = phxc::load_cell_file(o.cell_path);
    const phxc::UnitCell& cell = cell2_of(cf);

    const bool use_oracle =
        std::find(o.methods.begin(), o.methods.end(), "oracle") !=
        o.methods.end();
    double c_ref;
    if (use_oracle) {
        c_ref = phxc::oracle_effective_tensor(cell, o.grid).c1();
    } else {
        phxc::MmOptions ref_opt = mm_options(o);
        ref_opt.N = 2 * o.N;  // reference beyond the largest tested truncation
        c_ref = phxc::principal_speed(cell, ref_opt, 1).c;
    }

    struct Point {
        std::string method;
        int d, trunc, dim;
    };
    std::vector<Point> points;
    if (std::find(o.methods.begin(), o.methods.end(), "mm") != o.methods.end())
        for (int N : doubling(1, o.N))
            points.push_back({"mm", 2 * N + 1, N, 2 * (2 * N + 1)});
    if (std::find(o.methods.begin(), o.methods.end(), "pwe") != o.methods.end())
        for (int G : doubling(4, o.G)) {
            const int d = 2 * G + 1;
            points.push_back({"pwe", d, G, d * d - 1});
        }
    if (points.empty())
        throw std::runtime_error("convergence needs methods mm and/or pwe");

    std::vector<double> errs(points.size());
    std::vector<double> times(points.size());
    run_parallel(o.workers, static_cast<int>(points.size()), [&](int i) {
        const auto t0 = Clock::now();
        double c;
        if (points[i].method == "mm") {
            phxc::MmOptions opt = mm_options(o);
            opt.N = points[i].trunc;
            c = phxc::principal_speed(cell, opt, 1).c;
        } else {
            c = phxc::pwe_effective_tensor(cell, points[i].trunc).c1();
        }
        errs[i] = std::abs(c - c_ref) / c_ref;
        times[i] = elapsed_ms(t0);
    });

    std::vector<std::string> lines{"method,d,rel_err,wall_time_ms,matrix_dim"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::ostringstream s;
        s << points[i].method << ',' << points[i].d << ',' << num(errs[i])
          << ',' << num(times[i]) << ',' << points[i].dim;
        lines.push_back(s.str());
    }
    // least-squares slope of ln(err) versus d per method, as a footer
    for (const std::string& m : {"mm", "pwe"}) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i].method == m && errs[i] > 0) {
                xs.push_back(points[i].d);
                ys.push_back(std::log(errs[i]));
            }
        if (xs.size() < 2) continue;
        const double n = xs.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        lines.push_back("# fit method=" + m +
                        " log_err_slope_per_d=" + num(slope));
    }
    emit(o, lines);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasistatic effective sound speed of 2D phononic crystals"};
    app.require_subcommand(0, 1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool need_cell) {
        auto* c = sub->add_option("--cell", o.cell_path, "cell description file");
        if (need_cell) c->required();
        sub->add_option("--methods", o.methods,
                        "comma separated: mm,pwe,estimate,oracle,elastic3d")
            ->delimiter(',');
        sub->add_option("--N", o.N, "MM Fourier half-width");
        sub->add_option("--G", o.G, "PWE half-width per axis");
        sub->add_option("--grid", o.grid, "oracle grid size (power of two)");
        sub->add_option("--N2", o.N2, "elastic3d half-width, axis 2");
        sub->add_option("--N3", o.N3, "elastic3d half-width, axis 3");
        sub->add_option("--f-range", o.f_range, "sweep range a:b:steps");
        sub->add_option("--out", o.out_path, "also write CSV to this file");
        sub->add_option("--inverse-rule", o.inverse_rule,
                        "inverse-modulus truncation rule")
            ->check(CLI::IsMember({"direct", "laurent"}));
        sub->add_option("--workers", o.workers, "worker thread count")
            ->check(CLI::PositiveNumber);
    };

    auto* compute = app.add_subcommand("compute", "one cell, all methods");
    auto* sweep = app.add_subcommand("sweep", "concentration sweep");
    auto* conv = app.add_subcommand("convergence", "truncation study");
    auto* compare =
        app.add_subcommand("compare", "compute with a relative-gap column");
    for (auto* sub : {compute, sweep, conv, compare}) add_common(sub, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return cmd_compute(o, false);
        if (compare->parsed()) return cmd_compute(o, true);
        if (sweep->parsed()) return cmd_sweep(o);
        if (conv->parsed()) return cmd_convergence(o);
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
