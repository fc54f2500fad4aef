#ifndef PHXC_CELLFILE_HPP
#define PHXC_CELLFILE_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "phxc/cell.hpp"
#include "phxc/elastic3d.hpp"

namespace phxc {

/// Parsed cell description file. `dimension` is 2 (scalar shear problem)
/// or 3 (isotropic elastic phases given by rho, lambda, mu).
///
/// Format:
///   [cell]
///   dimension = 2
///   period1 = 1.0
///   period2 = 1.0
///   [background]
///   rho = 7.8e3
///   mu  = 80e9
///   [[inclusion]]
///   corner = 0.25 0.25
///   size   = 0.5 0.5
///   rho = 1.14e3
///   mu  = 1.48e9
///
/// 3D files add period3, a lambda field per phase, and 3-component
/// corner/size vectors. Lines starting with '#' are comments.
struct CellFile {
    int dimension = 2;
    std::optional<UnitCell> cell2;
    std::optional<ElasticCell> cell3;
};

CellFile parse_cell_file(std::istream& in);
CellFile load_cell_file(const std::string& path);

}  // namespace phxc

#endif
