#ifndef PHXC_CELL_HPP
#define PHXC_CELL_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace phxc {

/// One homogeneous constituent of the composite (SI units).
struct MaterialPhase {
    double rho;  // density, kg/m^3
    double mu;   // shear modulus, Pa

    bool operator==(const MaterialPhase&) const = default;
};

/// Axis-aligned rectangular inclusion inside the unit cell.
struct Inclusion {
    Eigen::Vector2d corner;  // lower-left corner
    Eigen::Vector2d size;
    MaterialPhase phase;
};

/// Rectangular-period unit cell: a background phase overpainted by an
/// ordered list of rectangular inclusions (later inclusions win where
/// they overlap). Immutable after construction.
class UnitCell {
public:
    UnitCell(double period1, double period2, MaterialPhase background,
             std::vector<Inclusion> inclusions = {});

    double period(int axis) const { return axis == 1 ? T1_ : T2_; }
    const MaterialPhase& background() const { return background_; }
    const std::vector<Inclusion>& inclusions() const { return inclusions_; }

    /// Phase at an interior point, painter's rule.
    const MaterialPhase& at(double x1, double x2) const;

    bool square() const { return T1_ == T2_; }

private:
    double T1_, T2_;
    MaterialPhase background_;
    std::vector<Inclusion> inclusions_;
};

/// Constant piece of a 1D material profile over [lo, hi).
struct ProfilePiece {
    double lo, hi;
    MaterialPhase phase;
};

/// One interval along the propagation axis on which the material does
/// not depend on that coordinate; profile runs along the cross axis.
struct Slab {
    double lo, hi;
    std::vector<ProfilePiece> profile;

    double length() const { return hi - lo; }
};

/// Exact decomposition of a piecewise-constant cell into slabs.
struct SlabPartition {
    int axis;              // propagation axis, 1 or 2
    double period_along;   // period in the slab axis
    double period_across;  // period in the profile axis
    std::vector<Slab> slabs;
};

UnitCell build_cell(double period1, double period2, MaterialPhase background,
                    std::vector<Inclusion> inclusions = {});

/// Slab decomposition along `axis`; breakpoints are exactly the distinct
/// inclusion-edge coordinates plus the cell boundary.
SlabPartition slab_partition(const UnitCell& cell, int axis = 1);

/// Exact area-weighted (<rho>, <mu>) means.
std::pair<double, double> cell_averages(const UnitCell& cell);

/// The same cell on the lattice turned by 45 degrees, rendered as a
/// staircase of `slices` vertical strips with exact cross profiles.
/// Requires a square period. The rotated cell has period T*sqrt(2).
UnitCell rotate45(const UnitCell& cell, int slices);

/// Volume fraction occupied by anything other than the background phase.
double inclusion_fraction(const UnitCell& cell);

}  // namespace phxc

#endif
