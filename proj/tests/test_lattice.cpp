#include <doctest.h>

#include <algorithm>

#include "sqd/lattice.hpp"

using namespace sqd;

TEST_SUITE("lattice") {

TEST_CASE("open chain bonds are consecutive pairs") {
    const Lattice lat = build_chain(5);
    CHECK(lat.sites() == 5);
    REQUIRE(lat.bonds.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(lat.bonds[i] == std::pair{i, i + 1});
}

TEST_CASE("periodic chain adds exactly the wrap bond") {
    const Lattice open = build_chain(6);
    const Lattice per = build_chain(6, true);
    CHECK(per.bonds.size() == open.bonds.size() + 1);
    CHECK(std::find(per.bonds.begin(), per.bonds.end(), std::pair{0, 5}) != per.bonds.end());
}

TEST_CASE("2-site periodic chain does not duplicate its single bond") {
    const Lattice per = build_chain(2, true);
    CHECK(per.bonds == std::vector{std::pair{0, 1}});
}

TEST_CASE("snake indexing reverses odd rows") {
    const Lattice lat = build_rect(2, 3);
    CHECK(lat.site_index(0, 0) == 0);
    CHECK(lat.site_index(0, 1) == 1);
    CHECK(lat.site_index(0, 2) == 2);
    CHECK(lat.site_index(1, 2) == 3);
    CHECK(lat.site_index(1, 1) == 4);
    CHECK(lat.site_index(1, 0) == 5);
}

TEST_CASE("rect bond count matches h*(w-1) + w*(h-1)") {
    for (auto [h, w] : {std::pair{2, 3}, {3, 3}, {3, 4}, {4, 4}}) {
        const Lattice lat = build_rect(h, w);
        CHECK(static_cast<int>(lat.bonds.size()) == h * (w - 1) + w * (h - 1));
    }
}

TEST_CASE("rect snake bonds are nearest neighbors in grid space") {
    const Lattice lat = build_rect(3, 4);
    // every vertical neighbor pair must appear exactly once
    int vertical = 0;
    for (int r = 0; r + 1 < 3; ++r)
        for (int c = 0; c < 4; ++c) {
            int a = lat.site_index(r, c), b = lat.site_index(r + 1, c);
            if (a > b) std::swap(a, b);
            vertical += std::count(lat.bonds.begin(), lat.bonds.end(), std::pair{a, b});
        }
    CHECK(vertical == 8);
}

TEST_CASE("bonds are normalized: first < second, sorted, unique") {
    for (const Lattice& lat : {build_rect(3, 4, true), build_chain(8, true)}) {
        CHECK(std::is_sorted(lat.bonds.begin(), lat.bonds.end()));
        CHECK(std::adjacent_find(lat.bonds.begin(), lat.bonds.end()) == lat.bonds.end());
        for (const auto& [a, b] : lat.bonds) CHECK(a < b);
    }
}

TEST_CASE("spec string parsing and labels round-trip") {
    CHECK(parse_lattice("chain:6").label() == "chain:6");
    CHECK(parse_lattice("rect:3x4").label() == "rect:3x4");
    CHECK(parse_lattice("rect:3x4:periodic").label() == "rect:3x4:periodic");
    CHECK(parse_lattice("chain:10:periodic").periodic);
    CHECK(parse_lattice("rect:2x3").sites() == 6);
}

TEST_CASE("malformed specs are rejected") {
    for (const char* bad : {"", "chain", "chain:0", "chain:-3", "rect:3", "rect:3x",
                            "rect:0x4", "ring:5", "chain:6:weird", "chain:abc"})
        CHECK_THROWS_AS(parse_lattice(bad), LatticeError);
}

}  // TEST_SUITE
