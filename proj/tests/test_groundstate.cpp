#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sqd/eigensolver.hpp"
#include "sqd/groundstate.hpp"
#include "sqd/lattice.hpp"

using namespace sqd;

namespace {

GroundState chain_ground(int n) {
    const auto H = SparseHamiltonian::heisenberg(build_chain(n), 1.0);
    const EigenResult r = sector_ground(H, {Sector::Kind::TotalPopcount, n / 2, 0});
    return GroundState::from_vector(r.value, r.vector, n,
                                    {{"model", "heisenberg"}, {"lattice", "chain:" + std::to_string(n)}});
}

}  // namespace

TEST_SUITE("groundstate") {

TEST_CASE("uniform distribution entropy is ln(n)") {
    std::vector<double> p(8, 0.125);
    CHECK(shannon_entropy(p) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
    CHECK(effective_support(p) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("point distribution has zero entropy") {
    std::vector<double> p = {1.0, 0.0, 0.0};
    CHECK(shannon_entropy(p) == 0.0);
    CHECK(effective_support(p) == 1.0);
}

TEST_CASE("probabilities validates normalization") {
    std::vector<double> good = {0.6, 0.8};
    CHECK(probabilities(good) == std::vector<double>{0.36, 0.64000000000000012});
    std::vector<double> bad = {0.6, 0.6};
    CHECK_THROWS_AS(probabilities(bad), GroundStateError);
}

TEST_CASE("from_vector sorts support by descending probability") {
    std::vector<double> psi = {0.0, 0.8, -0.6, 0.0};
    const GroundState gs = GroundState::from_vector(-1.0, psi, 2);
    REQUIRE(gs.support().size() == 2);
    CHECK(gs.support()[0].first == 1);
    CHECK(gs.support()[1].first == 2);
    CHECK(gs.probability(1) == doctest::Approx(0.64));
    CHECK(gs.probability(0) == 0.0);
    CHECK_THROWS_AS(gs.probability(4), GroundStateError);
}

TEST_CASE("degenerate probabilities tie-break by ascending bits") {
    const GroundState gs = chain_ground(2);  // singlet: p = 1/2 on |01>, |10>
    REQUIRE(gs.support().size() == 2);
    CHECK(gs.support()[0].first == 1);
    CHECK(gs.support()[1].first == 2);
    CHECK(gs.cumulative_mass(std::vector<Configuration>{1}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cumulative mass over the full basis is one, over nothing zero") {
    const GroundState gs = chain_ground(4);
    std::vector<Configuration> all;
    for (Configuration c = 0; c < 16; ++c) all.push_back(c);
    CHECK(gs.cumulative_mass(all) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gs.cumulative_mass(std::vector<Configuration>{}) == 0.0);
    CHECK_THROWS_AS(gs.cumulative_mass(std::vector<Configuration>{99}), GroundStateError);
}

TEST_CASE("chain(6) entropy matches the frozen oracle") {
    const GroundState gs = chain_ground(6);
    CHECK(gs.energy() == doctest::Approx(-2.493577133887925).epsilon(1e-12));
    CHECK(gs.effective_support() == doctest::Approx(10.172591250789109).epsilon(1e-10));
    CHECK(gs.support().size() == 20);
}

TEST_CASE("dump/load round-trip preserves everything exactly") {
    const GroundState gs = chain_ground(6);
    std::stringstream ss;
    gs.dump(ss);
    const GroundState back = GroundState::load(ss);
    CHECK(back.energy() == gs.energy());
    CHECK(back.n_qubits() == gs.n_qubits());
    CHECK(back.support() == gs.support());
    CHECK(back.metadata() == gs.metadata());
    // dumping again is byte-identical
    std::stringstream ss2;
    back.dump(ss2);
    std::stringstream ss3;
    gs.dump(ss3);
    CHECK(ss2.str() == ss3.str());
}

TEST_CASE("malformed dumps are rejected") {
    const GroundState gs = chain_ground(4);
    std::stringstream ss;
    gs.dump(ss);
    const std::string full = ss.str();

    std::istringstream bad_header("# not-a-dump\n");
    CHECK_THROWS_AS(GroundState::load(bad_header), GroundStateError);

    std::istringstream truncated(full.substr(0, full.size() / 2));
    CHECK_THROWS_AS(GroundState::load(truncated), GroundStateError);

    std::string corrupted = full;
    corrupted.replace(corrupted.find("support="), 9, "support=9");
    std::istringstream wrong_count(corrupted);
    CHECK_THROWS_AS(GroundState::load(wrong_count), GroundStateError);
}

}  // TEST_SUITE
