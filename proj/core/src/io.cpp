#include "egs/io.hpp"

#include "egs/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace egs {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Next non-comment, non-blank line; false at end of input.
bool next_line(std::istream& is, std::string& line) {
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

}  // namespace

void write_field(std::ostream& os, const Field& u, double p) {
    const auto& g = u.grid();
    os << g.N() << ' ' << g.m() << ' ' << fmt(g.radial().inner()) << ' ' << fmt(p) << ' '
       << fmt(g.radial().outer()) << ' ' << g.M() << ' ' << g.J() << '\n';
    for (int i = 0; i <= g.M(); ++i) {
        for (int j = 0; j < g.J(); ++j) os << (j ? " " : "") << fmt(u(i, j));
        os << '\n';
    }
}

FieldFile read_field(std::istream& is) {
    FieldFile f;
    std::string line;
    if (!next_line(is, line)) throw InvalidArgument("field file: missing header");
    {
        std::istringstream hs(line);
        auto& h = f.header;
        if (!(hs >> h.N >> h.m >> h.R >> h.p >> h.r_max >> h.M >> h.J)) {
            throw InvalidArgument("field file: malformed header");
        }
        if (h.M < 2 || h.J < 1) throw InvalidArgument("field file: bad grid sizes");
    }
    const auto& h = f.header;
    f.values.reserve(static_cast<std::size_t>(h.M + 1) * h.J);
    for (int i = 0; i <= h.M; ++i) {
        if (!next_line(is, line)) throw InvalidArgument("field file: truncated at row " + std::to_string(i));
        std::istringstream ls(line);
        double v;
        int count = 0;
        while (ls >> v) {
            f.values.push_back(v);
            ++count;
        }
        if (count != h.J) throw InvalidArgument("field file: row " + std::to_string(i) + " has wrong length");
    }
    return f;
}

Field to_field(const FieldFile& file) {
    const auto& h = file.header;
    auto grid = Grid2D::make(RadialGrid::uniform(h.N, h.R, h.r_max, h.M), h.J, h.m);
    return Field(grid, file.values);
}

void write_profile(std::ostream& os, const RadialProfile& u) {
    os << "# r u\n";
    for (int i = 0; i <= u.grid().intervals(); ++i) os << fmt(u.grid().node(i)) << ' ' << fmt(u[i]) << '\n';
}

RadialProfile read_profile(std::istream& is, int N) {
    std::vector<double> r, u;
    std::string line;
    while (next_line(is, line)) {
        std::istringstream ls(line);
        double a, b;
        if (!(ls >> a >> b)) throw InvalidArgument("profile file: expected two columns");
        r.push_back(a);
        u.push_back(b);
    }
    return RadialProfile(RadialGrid(N, std::move(r)), std::move(u));
}

void write_ag_field(std::ostream& os, const AgSolution& sol, double p) {
    const auto& g = *sol.grid;
    os << "# A_g field: rows are s-cells, columns t-cells, cell-centred on [0, L]^2; masked cells are 0\n";
    os << g.N() << ' ' << g.m() << ' ' << fmt(std::sqrt(g.g().c)) << ' ' << fmt(p) << ' ' << fmt(g.L()) << ' '
       << g.cells() - 1 << ' ' << g.cells() << '\n';
    for (int a = 0; a < g.cells(); ++a) {
        for (int b = 0; b < g.cells(); ++b) os << (b ? " " : "") << fmt(sol.values[g.index(a, b)]);
        os << '\n';
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << contents;
    if (!f) throw Error("failed writing " + path);
}

}  // namespace egs
