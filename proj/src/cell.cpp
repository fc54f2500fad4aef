#include "phxc/cell.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phxc {

namespace {

void check_phase(const MaterialPhase& p) {
    if (!(p.rho > 0.0) || !(p.mu > 0.0))
        throw std::invalid_argument("material phase requires rho > 0 and mu > 0");
}

double wrap(double x, double period) {
    double y = x - period * std::floor(x / period);
    if (y >= period) y -= period;
    return y;
}

std::vector<double> sorted_unique(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    return out;
}

}  // namespace

UnitCell::UnitCell(double period1, double period2, MaterialPhase background,
                   std::vector<Inclusion> inclusions)
    : T1_(period1), T2_(period2), background_(background),
      inclusions_(std::move(inclusions)) {
    if (!(T1_ > 0.0) || !(T2_ > 0.0))
        throw std::invalid_argument("cell periods must be positive");
    check_phase(background_);
    const double tol = 1e-12 * std::max(T1_, T2_);
    for (const auto& inc : inclusions_) {
        check_phase(inc.phase);
        if (!(inc.size.x() > 0.0) || !(inc.size.y() > 0.0))
            throw std::invalid_argument("inclusion size must be positive");
        if (inc.corner.x() < -tol || inc.corner.y() < -tol ||
            inc.corner.x() + inc.size.x() > T1_ + tol ||
            inc.corner.y() + inc.size.y() > T2_ + tol)
            throw std::invalid_argument("inclusion lies outside the unit cell");
    }
}

const MaterialPhase& UnitCell::at(double x1, double x2) const {
    // Later inclusions override earlier ones.
    for (auto it = inclusions_.rbegin(); it != inclusions_.rend(); ++it) {
        if (x1 >= it->corner.x() && x1 < it->corner.x() + it->size.x() &&
            x2 >= it->corner.y() && x2 < it->corner.y() + it->size.y())
            return it->phase;
    }
    return background_;
}

UnitCell build_cell(double period1, double period2, MaterialPhase background,
                    std::vector<Inclusion> inclusions) {
    return UnitCell(period1, period2, background, std::move(inclusions));
}

SlabPartition slab_partition(const UnitCell& cell, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("axis must be 1 or 2");
    const int cross = 3 - axis;
    const double Ta = cell.period(axis);
    const double Tc = cell.period(cross);
    const double tol = 1e-12 * std::max(Ta, Tc);

    auto lo_of = [&](const Inclusion& inc, int ax) {
        return ax == 1 ? inc.corner.x() : inc.corner.y();
    };
    auto hi_of = [&](const Inclusion& inc, int ax) {
        return ax == 1 ? inc.corner.x() + inc.size.x()
                       : inc.corner.y() + inc.size.y();
    };

    std::vector<double> cuts{0.0, Ta};
    for (const auto& inc : cell.inclusions()) {
        cuts.push_back(std::clamp(lo_of(inc, axis), 0.0, Ta));
        cuts.push_back(std::clamp(hi_of(inc, axis), 0.0, Ta));
    }
    cuts = sorted_unique(std::move(cuts), tol);

    SlabPartition part{axis, Ta, Tc, {}};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Slab slab{cuts[i], cuts[i + 1], {}};
        const double mid_a = 0.5 * (slab.lo + slab.hi);

        std::vector<double> ccuts{0.0, Tc};
        for (const auto& inc : cell.inclusions()) {
            if (lo_of(inc, axis) <= mid_a && mid_a < hi_of(inc, axis)) {
                ccuts.push_back(std::clamp(lo_of(inc, cross), 0.0, Tc));
                ccuts.push_back(std::clamp(hi_of(inc, cross), 0.0, Tc));
            }
        }
        ccuts = sorted_unique(std::move(ccuts), tol);

        for (std::size_t j = 0; j + 1 < ccuts.size(); ++j) {
            const double mid_c = 0.5 * (ccuts[j] + ccuts[j + 1]);
            const MaterialPhase& p = axis == 1 ? cell.at(mid_a, mid_c)
                                               : cell.at(mid_c, mid_a);
            if (!slab.profile.empty() && slab.profile.back().phase == p)
                slab.profile.back().hi = ccuts[j + 1];
            else
                slab.profile.push_back({ccuts[j], ccuts[j + 1], p});
        }
        part.slabs.push_back(std::move(slab));
    }
    return part;
}

std::pair<double, double> cell_averages(const UnitCell& cell) {
    const SlabPartition part = slab_partition(cell, 1);
    const double area = part.period_along * part.period_across;
    double rho = 0.0, mu = 0.0;
    for (const auto& slab : part.slabs)
        for (const auto& piece : slab.profile) {
            const double w = slab.length() * (piece.hi - piece.lo) / area;
            rho += w * piece.phase.rho;
            mu += w * piece.phase.mu;
        }
    return {rho, mu};
}

double inclusion_fraction(const UnitCell& cell) {
    const SlabPartition part = slab_partition(cell, 1);
    const double area = part.period_along * part.period_across;
    double f = 0.0;
    for (const auto& slab : part.slabs)
        for (const auto& piece : slab.profile)
            if (!(piece.phase == cell.background()))
                f += slab.length() * (piece.hi - piece.lo) / area;
    return f;
}

UnitCell rotate45(const UnitCell& cell, int slices) {
    if (!cell.square())
        throw std::invalid_argument("rotate45 requires a square cell period");
    if (slices < 1)
        throw std::invalid_argument("rotate45 requires at least one slice");

    const double T = cell.period(1);
    const double S = T * std::sqrt(2.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double tol = 1e-12 * T;

    // Edge coordinates of the original cell along each axis.
    std::vector<double> edges1{0.0, T}, edges2{0.0, T};
    for (const auto& inc : cell.inclusions()) {
        edges1.push_back(inc.corner.x());
        edges1.push_back(inc.corner.x() + inc.size.x());
        edges2.push_back(inc.corner.y());
        edges2.push_back(inc.corner.y() + inc.size.y());
    }

    std::vector<Inclusion> strips;
    for (int i = 0; i < slices; ++i) {
        const double y1 = (i + 0.5) * S / slices;

        // The rotated axis e_{y1} points along the original diagonal
        // (1,1)/sqrt(2); along the strip the original coordinates are
        //   x1 = (y1 - y2)/sqrt(2),  x2 = (y1 + y2)/sqrt(2),
        // so each original edge is crossed at known y2 values.
        std::vector<double> cuts{0.0, S};
        for (double e : edges1)
            for (int k = -2; k <= 2; ++k) {
                const double y2 = y1 - std::sqrt(2.0) * (e + k * T);
                if (y2 > tol && y2 < S - tol) cuts.push_back(y2);
            }
        for (double e : edges2)
            for (int k = -2; k <= 2; ++k) {
                const double y2 = std::sqrt(2.0) * (e + k * T) - y1;
                if (y2 > tol && y2 < S - tol) cuts.push_back(y2);
            }
        cuts = sorted_unique(std::move(cuts), tol);

        double run_lo = 0.0;
        const MaterialPhase* run_phase = nullptr;
        for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
            const double y2 = 0.5 * (cuts[j] + cuts[j + 1]);
            const double x1 = wrap((y1 - y2) * inv_sqrt2, T);
            const double x2 = wrap((y1 + y2) * inv_sqrt2, T);
            const MaterialPhase& p = cell.at(x1, x2);
            if (run_phase && p == *run_phase) continue;
            if (run_phase && !(*run_phase == cell.background()))
                strips.push_back({{i * S / slices, run_lo},
                                  {S / slices, cuts[j] - run_lo},
                                  *run_phase});
            run_lo = cuts[j];
            run_phase = &p;
        }
        if (run_phase && !(*run_phase == cell.background()))
            strips.push_back({{i * S / slices, run_lo},
                              {S / slices, S - run_lo},
                              *run_phase});
    }
    return UnitCell(S, S, cell.background(), std::move(strips));
}

}  // namespace phxc
