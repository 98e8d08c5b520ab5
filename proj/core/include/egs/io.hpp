#pragma once

// Text formats. Field files: line 1 "N m R p r_max M J", then M+1 lines of J
// values (row-major in r); radial profiles: two columns "r u". Values are
// written with 17 significant digits so that reading restores them exactly.
// Lines starting with '#' are comments.

#include "egs/domain_ag.hpp"
#include "egs/grid2d.hpp"

#include <iosfwd>
#include <string>

namespace egs {

struct FieldHeader {
    int N = 0, m = 0;
    double R = 0.0, p = 0.0, r_max = 0.0;
    int M = 0, J = 0;
};

struct FieldFile {
    FieldHeader header;
    std::vector<double> values;  ///< (M+1) × J
};

void write_field(std::ostream& os, const Field& u, double p);
FieldFile read_field(std::istream& is);
/// Rebuilds the uniform grid described by the header and wraps the values.
Field to_field(const FieldFile& file);

void write_profile(std::ostream& os, const RadialProfile& u);
/// Reads (r, u) pairs; the nodes become the profile's radial grid.
RadialProfile read_profile(std::istream& is, int N);

/// A_g fields use the same layout with rows indexed by s: the header carries
/// M = cells − 1, J = cells, R = √c and r_max = L.
void write_ag_field(std::ostream& os, const AgSolution& sol, double p);

void write_file(const std::string& path, const std::string& contents);

}  // namespace egs
