#include "sqd/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

namespace sqd {

void fix_sign(std::span<double> v) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (!v.empty() && v[arg] < 0.0)
        for (double& x : v) x = -x;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void random_unit(std::span<double> v, std::mt19937_64& rng) {
    // fixed uniform mapping, independent of library distribution internals
    for (double& x : v) x = 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
    const double n = norm(v);
    for (double& x : v) x /= n;
}

// Krylov basis in one contiguous row-major buffer.
class KrylovBasis {
  public:
    KrylovBasis(std::uint64_t dim, int capacity) : dim_(dim) { data_.reserve(16 * dim); }

    int size() const { return count_; }
    std::span<const double> operator[](int i) const { return {data_.data() + i * dim_, dim_}; }

    void push(std::span<const double> v) {
        data_.insert(data_.end(), v.begin(), v.end());
        ++count_;
    }

    // w -= B^T B w, twice (classical Gram-Schmidt with reorthogonalization).
    // Deterministic: every accumulation runs in a fixed order.
    void orthogonalize(std::span<double> w) const {
        std::vector<double> c(count_);
        for (int pass = 0; pass < 2; ++pass) {
#pragma omp parallel for schedule(static)
            for (int q = 0; q < count_; ++q) c[q] = dot((*this)[q], w);
#pragma omp parallel for schedule(static)
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(dim_); ++i) {
                double acc = w[i];
                for (int q = 0; q < count_; ++q) acc -= c[q] * data_[q * dim_ + i];
                w[i] = acc;
            }
        }
    }

    // x = B^T coeffs
    void assemble(std::span<const double> coeffs, std::span<double> x) const {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(dim_); ++i) {
            double acc = 0.0;
            for (int q = 0; q < count_ && q < static_cast<int>(coeffs.size()); ++q)
                acc += coeffs[q] * data_[q * dim_ + i];
            x[i] = acc;
        }
    }

  private:
    std::uint64_t dim_;
    int count_ = 0;
    std::vector<double> data_;
};

// Lowest eigenvalue of the symmetric tridiagonal (alpha, beta).
double tridiag_min_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e(m > 1 ? m - 1 : 1);
    for (int i = 0; i + 1 < m; ++i) e(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e.head(std::max(m - 1, 0)), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

// Eigenvector of the tridiagonal for a known eigenvalue, via shifted inverse
// iteration with the Thomas algorithm.
std::vector<double> tridiag_eigenvector(const std::vector<double>& alpha,
                                        const std::vector<double>& beta, double lambda) {
    const int m = static_cast<int>(alpha.size());
    std::vector<double> y(m, 1.0 / std::sqrt(static_cast<double>(m)));
    const double shift = lambda - 1e-12 * (std::abs(lambda) + 1.0);
    for (int pass = 0; pass < 3; ++pass) {
        // solve (T - shift I) z = y in place
        std::vector<double> diag(m), rhs = y;
        for (int i = 0; i < m; ++i) diag[i] = alpha[i] - shift;
        for (int i = 1; i < m; ++i) {
            const double w = beta[i - 1] / diag[i - 1];
            diag[i] -= w * beta[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        std::vector<double> z(m);
        z[m - 1] = rhs[m - 1] / diag[m - 1];
        for (int i = m - 2; i >= 0; --i) z[i] = (rhs[i] - beta[i] * z[i + 1]) / diag[i];
        double n = 0.0;
        for (double v : z) n += v * v;
        n = std::sqrt(n);
        bool ok = n > 0 && std::isfinite(n);
        if (ok)
            for (int i = 0; i < m; ++i) y[i] = z[i] / n;
        else
            break;
    }
    if (!std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); })) {
        // rare fallback: full dense tridiagonal solve
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        int lo;
        es.eigenvalues().minCoeff(&lo);
        auto v = es.eigenvectors().col(lo);
        y.assign(v.data(), v.data() + m);
    }
    return y;
}

}  // namespace

EigenResult lanczos_ground(
    const std::function<void(std::span<const double>, std::span<double>)>& op, std::uint64_t dim,
    const SolverOpts& opts, bool want_vector) {
    if (dim == 0) throw SolverError("empty operator");
    if (opts.tol <= 0) throw SolverError("tolerance must be positive");
    const int max_iter =
        opts.max_iter > 0 ? opts.max_iter
                          : static_cast<int>(10.0 * std::sqrt(static_cast<double>(dim))) + 200;

    if (dim == 1) {
        std::vector<double> e{1.0}, y(1);
        op(e, y);
        EigenResult r;
        r.value = y[0];
        if (want_vector) r.vector = {1.0};
        r.iterations = 1;
        r.residual = 0.0;
        return r;
    }

    // Krylov bases are capped per sweep; an unconverged sweep restarts from
    // its Ritz vector, which keeps memory bounded and preserves progress.
    const int sweep_cap = static_cast<int>(std::min<std::uint64_t>(dim, 400));

    std::mt19937_64 rng(opts.seed);
    std::vector<double> start(dim), w(dim), x(dim);
    random_unit(start, rng);

    int total_iters = 0;
    double best_residual = std::numeric_limits<double>::infinity();
    double value = 0.0;

    while (true) {
        KrylovBasis basis(dim, sweep_cap);
        basis.push(start);
        std::vector<double> alpha, beta;
        bool converged = false;
        bool exhausted = false;

        for (int j = 0; j < sweep_cap; ++j) {
            op(basis[j], w);
            ++total_iters;
            const double a = dot(w, basis[j]);
            alpha.push_back(a);
            basis.orthogonalize(w);
            const double b = norm(w);

            value = tridiag_min_eigenvalue(alpha, beta);
            auto s = tridiag_eigenvector(alpha, beta, value);
            const double residual_est = b * std::abs(s.back());
            best_residual = std::min(best_residual, residual_est);

            if (residual_est <= opts.tol ||
                static_cast<std::uint64_t>(alpha.size()) == dim) {
                basis.assemble(s, x);
                converged = residual_est <= opts.tol;
                exhausted = !converged;
                break;
            }
            if (b < 1e-13) {
                // invariant subspace; continue in the orthogonal complement
                random_unit(w, rng);
                basis.orthogonalize(w);
                const double nb = norm(w);
                if (nb < 1e-13) {
                    basis.assemble(s, x);
                    exhausted = true;
                    break;
                }
                beta.push_back(0.0);
                for (double& e : w) e /= nb;
                basis.push(w);
                continue;
            }
            beta.push_back(b);
            for (double& e : w) e /= b;
            basis.push(w);
            if (j + 1 == sweep_cap) basis.assemble(tridiag_eigenvector(alpha, beta, value), x);
        }

        const double xn = norm(x);
        for (double& e : x) e /= xn;
        if (converged || exhausted) break;
        if (total_iters >= max_iter)
            throw ConvergenceError("Lanczos did not converge within max_iter", best_residual);
        start = x;  // restart
    }

    // true residual of the assembled Ritz vector
    op(x, w);
    double res = 0.0;
    for (std::uint64_t k = 0; k < dim; ++k) {
        const double d = w[k] - value * x[k];
        res += d * d;
    }
    EigenResult result;
    result.value = value;
    result.iterations = total_iters;
    result.residual = std::sqrt(res);
    fix_sign(x);
    if (want_vector) result.vector = std::move(x);
    return result;
}

EigenResult lanczos_ground(const ProjectedMatrix& M, const SolverOpts& opts, bool want_vector) {
    return lanczos_ground(
        [&M](std::span<const double> x, std::span<double> y) { M.apply(x, y); }, M.size, opts,
        want_vector);
}

EigenResult lanczos_ground(const SparseHamiltonian& H, const SolverOpts& opts, bool want_vector) {
    return lanczos_ground(
        [&H](std::span<const double> x, std::span<double> y) {
            auto r = H.apply(x);
            std::copy(r.begin(), r.end(), y.begin());
        },
        H.dimension(), opts, want_vector);
}

double dense_eigmin(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols() || M.rows() < 1) throw SolverError("matrix must be square");
    const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw SolverError("matrix is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double projected_eigmin(const ProjectedMatrix& M, const SolverOpts& opts) {
    if (M.size <= 2000) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M.size, M.size);
        for (std::uint64_t r = 0; r < M.size; ++r)
            for (std::uint64_t k = M.row_ptr[r]; k < M.row_ptr[r + 1]; ++k)
                D(r, M.col[k]) = M.val[k];
        return dense_eigmin(D);
    }
    return lanczos_ground(M, opts, /*want_vector=*/false).value;
}

std::vector<Configuration> enumerate_sector(const SparseHamiltonian& H, const Sector& sector) {
    if (sector.kind == Sector::Kind::TotalPopcount)
        return popcount_sector(H.n_qubits(), sector.a);
    if (H.model() != Model::Hubbard)
        throw SolverError("block-popcount sector requires a Hubbard Hamiltonian");
    return hubbard_sector(H.lattice().sites(), sector.a, sector.b);
}

EigenResult sector_ground(const SparseHamiltonian& H, const Sector& sector,
                          const SolverOpts& opts) {
    auto basis = enumerate_sector(H, sector);
    if (basis.empty()) throw SolverError("empty symmetry sector");
    ProjectedMatrix M = H.project(basis);
    EigenResult inner = lanczos_ground(M, opts, /*want_vector=*/true);
    EigenResult out;
    out.value = inner.value;
    out.iterations = inner.iterations;
    out.residual = inner.residual;
    out.vector.assign(H.dimension(), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) out.vector[basis[i]] = inner.vector[i];
    return out;
}

}  // namespace sqd
