#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sqd/eigensolver.hpp"
#include "sqd/lattice.hpp"

using namespace sqd;

namespace {

ProjectedMatrix diag_matrix(std::initializer_list<double> d) {
    ProjectedMatrix M;
    M.size = d.size();
    M.row_ptr.push_back(0);
    std::uint32_t i = 0;
    for (double v : d) {
        M.col.push_back(i++);
        M.val.push_back(v);
        M.row_ptr.push_back(M.col.size());
    }
    return M;
}

Eigen::MatrixXd dense_of(const ProjectedMatrix& M) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M.size, M.size);
    for (std::uint64_t r = 0; r < M.size; ++r)
        for (std::uint64_t k = M.row_ptr[r]; k < M.row_ptr[r + 1]; ++k) D(r, M.col[k]) = M.val[k];
    return D;
}

}  // namespace

TEST_SUITE("eigensolver") {

TEST_CASE("diagonal operator: lowest eigenpair recovered exactly") {
    const auto M = diag_matrix({3.0, 1.0, 2.0});
    const EigenResult r = lanczos_ground(M);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.vector.size() == 3);
    CHECK(std::abs(r.vector[1]) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.vector[1] > 0.0);  // sign-fixed
    CHECK(r.residual <= 1e-10);
}

TEST_CASE("dimension-1 operator") {
    const auto M = diag_matrix({-2.5});
    const EigenResult r = lanczos_ground(M);
    CHECK(r.value == doctest::Approx(-2.5));
    CHECK(r.vector == std::vector<double>{1.0});
}

TEST_CASE("Lanczos agrees with the dense solver on chain(12)") {
    const auto H = SparseHamiltonian::heisenberg(build_chain(12), 1.0);
    const auto basis = H.default_sector_basis();
    const auto M = H.project(basis);
    const EigenResult r = lanczos_ground(M);
    CHECK(r.value == doctest::Approx(-5.142090632840532).epsilon(1e-10));
    CHECK(std::abs(r.value - dense_eigmin(dense_of(M))) < 1e-8);
}

TEST_CASE("repeated solves are bitwise deterministic") {
    const auto H = SparseHamiltonian::heisenberg(build_chain(10), 1.0);
    const auto M = H.project(H.default_sector_basis());
    const EigenResult a = lanczos_ground(M);
    const EigenResult b = lanczos_ground(M);
    CHECK(a.value == b.value);
    CHECK(a.vector == b.vector);
}

TEST_CASE("Lanczos value is variational: never below the exact minimum") {
    const auto H = SparseHamiltonian::heisenberg(build_chain(8), 1.0);
    const auto M = H.project(H.default_sector_basis());
    const double exact = dense_eigmin(dense_of(M));
    const EigenResult r = lanczos_ground(M);
    CHECK(r.value >= exact - 1e-9);
}

TEST_CASE("residual contract: ||Ax - lambda x|| below tolerance") {
    const auto H = SparseHamiltonian::heisenberg(build_chain(9), 1.0);
    const auto M = H.project(H.default_sector_basis());
    SolverOpts opts;
    opts.tol = 1e-10;
    const EigenResult r = lanczos_ground(M, opts);
    std::vector<double> y(M.size);
    M.apply(r.vector, y);
    double n2 = 0.0;
    for (std::uint64_t i = 0; i < M.size; ++i) {
        const double d = y[i] - r.value * r.vector[i];
        n2 += d * d;
    }
    CHECK(std::sqrt(n2) <= 1e-9);
}

TEST_CASE("fix_sign makes the largest-magnitude component positive") {
    std::vector<double> v = {0.1, -0.9, 0.3};
    fix_sign(v);
    CHECK(v == std::vector<double>{-0.1, 0.9, -0.3});
    std::vector<double> w = {0.5, 0.5};
    fix_sign(w);
    CHECK(w == std::vector<double>{0.5, 0.5});
}

TEST_CASE("dense_eigmin rejects asymmetric input") {
    Eigen::MatrixXd M(2, 2);
    M << 0, 1, 2, 0;
    CHECK_THROWS_AS(dense_eigmin(M), SolverError);
}

TEST_CASE("sector enumeration sizes") {
    const auto Hh = SparseHamiltonian::heisenberg(build_chain(6), 1.0);
    CHECK(enumerate_sector(Hh, {Sector::Kind::TotalPopcount, 3, 0}).size() == 20);
    const auto Hu = SparseHamiltonian::hubbard(build_chain(3), 1.0, 2.0, 1, 1);
    CHECK(enumerate_sector(Hu, {Sector::Kind::BlockPopcounts, 1, 1}).size() == 9);
}

TEST_CASE("sector_ground scatters the eigenvector into full coordinates") {
    const auto H = SparseHamiltonian::heisenberg(build_chain(4), 1.0);
    const EigenResult r = sector_ground(H, {Sector::Kind::TotalPopcount, 2, 0});
    CHECK(r.value == doctest::Approx(-1.6160254037844388).epsilon(1e-12));
    REQUIRE(r.vector.size() == 16);
    for (std::uint64_t i = 0; i < 16; ++i)
        if (__builtin_popcountll(i) != 2) CHECK(r.vector[i] == 0.0);
    double n2 = 0.0;
    for (double a : r.vector) n2 += a * a;
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
}

}  // TEST_SUITE
