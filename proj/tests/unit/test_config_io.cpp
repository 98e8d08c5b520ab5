#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egs/errors.hpp"
#include "egs/io.hpp"
#include "egs/radial.hpp"
#include "egs_cli/config.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace egs;
using namespace egs::cli;

namespace {

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("valid configurations fill defaults") {
    const auto c = parse_config("N = 3\nm = 2\np = 4\nR = 2\nweight = constant 1\n");
    CHECK(c.spec.N == 3);
    CHECK(c.spec.m == 2);
    CHECK(c.spec.p == 4.0);
    CHECK(c.spec.R == 2.0);
    CHECK(c.spec.r_max == 27.0);
    CHECK(c.spec.domain.is_ball());
    CHECK(c.tol == 1e-7);
    CHECK(c.M == 512);
    CHECK(c.J == 64);
    CHECK(c.seed == 1);

    // 2*_2 = ∞, so any p > 2 is admissible for N = 3, m = 2
    CHECK_NOTHROW(parse_config("p = 7\nN = 3\nm = 2"));

    const auto d = parse_config(
        "# comment line\nN = 6   # trailing\nm = 4\np = 5\ndomain = affine 0.5 1\n"
        "weight = separable 1 0.5 ; 0:1 1.5:0.5\nsweep.R = 0.5:1.5:0.5\nsweep.p = 3 4\nfamily.m = 4 5\n");
    CHECK_FALSE(d.spec.domain.is_ball());
    CHECK(d.spec.R == doctest::Approx(d.spec.domain.inner_radius()));
    CHECK(d.sweep_R == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(d.sweep_p == std::vector<double>{3.0, 4.0});
    CHECK(d.family_m == std::vector<int>{4, 5});
    CHECK_FALSE(d.spec.weight.is_radial());
}

TEST_CASE("errors carry the offending line") {
    CHECK(error_line("m = 1") == 1);
    CHECK(error_line("N = 3\nm = 2\np = 4\nfoo = 1") == 4);
    CHECK(error_line("N = 3\nm = 2\np = four") == 3);
    CHECK(error_line("N = 3\nm = 2\np = 4\nN = 4") == 4);
    CHECK(error_line("N = 3\nm = 2\np = 4\nweight = constant") == 4);
    CHECK(error_line("N = 3\n\nm = 3\np = 4") == 3);
    CHECK(error_line("N = 3\nm = 2\np = 1.5") == 3);
    CHECK(error_line("N = 3\nm = 2\np = 4\nR = 2\nr_max = 1") == 5);
    CHECK(error_line("N = 3\nm = 2\np = 4\ngarbage") == 4);
    CHECK(error_line("N = 3\nm = 2\np = 4\nsweep.R = 1:0:1") == 4);
    CHECK(error_line("N = 3\nm = 2") == 0);  // missing key: no line to point at
    CHECK_THROWS_AS(parse_grid("64"), ConfigError);
    CHECK(parse_grid("128x32") == std::pair{128, 32});
}

TEST_CASE("config hash") {
    const auto a = parse_config("N = 3\nm = 2\np = 4\nR = 2");
    const auto b = parse_config("# same thing\np = 4\n R = 2.0 \nm = 2\nN = 3\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    auto c = a;
    c.seed = 2;
    CHECK(c.hash() != a.hash());
    c = a;
    c.spec.p = std::nextafter(4.0, 5.0);
    CHECK(c.hash() != a.hash());
}

TEST_CASE("field files round-trip exactly") {
    auto spec = ProblemSpec::exterior_ball(4, 2, 3.5, 1.25);
    spec.r_max = 9.75;
    const auto g = Grid2D::make(spec, 24, 7);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Field u(g);
    for (int i = 1; i < 24; ++i) {
        for (int j = 0; j < 7; ++j) u.at(i, j) = U(rng) * std::pow(10.0, 20.0 * U(rng) - 10.0);
    }
    std::stringstream ss;
    write_field(ss, u, spec.p);
    const auto file = read_field(ss);
    CHECK(file.header.N == 4);
    CHECK(file.header.m == 2);
    CHECK(file.header.R == 1.25);
    CHECK(file.header.p == 3.5);
    CHECK(file.header.r_max == 9.75);
    CHECK(file.header.M == 24);
    CHECK(file.header.J == 7);
    CHECK(file.values == u.values());
    const Field back = to_field(file);
    CHECK(back.values() == u.values());
    CHECK(back.grid().radial().node(13) == g->radial().node(13));

    std::stringstream out2;
    write_field(out2, back, spec.p);
    std::stringstream out1;
    write_field(out1, u, spec.p);
    CHECK(out1.str() == out2.str());

    std::istringstream bad("3 2 1 4 26 8\n");
    CHECK_THROWS_AS(read_field(bad), InvalidArgument);
    std::istringstream truncated("3 2 1 4 26 4 2\n0 0\n1 1\n");
    CHECK_THROWS_AS(read_field(truncated), InvalidArgument);
}

TEST_CASE("profile files round-trip exactly") {
    auto spec = ProblemSpec::exterior_ball(3, 2, 4.0, 2.0);
    const auto u = solve_radial(spec, RadialGrid::uniform(3, 2.0, spec.r_max, 512)).first;
    std::stringstream ss;
    write_profile(ss, u);
    const auto back = read_profile(ss, 3);
    CHECK(back.values() == u.values());
    for (int i = 0; i <= 512; ++i) CHECK(back.grid().node(i) == u.grid().node(i));
    CHECK(radial_energy(back, spec) == radial_energy(u, spec));
}
