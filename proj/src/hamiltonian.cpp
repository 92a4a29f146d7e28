#include "sqd/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cinttypes>
#include <cstdio>
#include <ostream>
#include <unordered_map>

namespace sqd {

namespace {

// Jordan-Wigner parity mask: qubits strictly between lo and hi.
inline Configuration between_mask(int lo, int hi) {
    if (hi - lo <= 1) return 0;
    return ((Configuration{1} << hi) - 1) & ~((Configuration{1} << (lo + 1)) - 1);
}

}  // namespace

// Enumerates the row entries of either model without virtual dispatch.
// Fn: (Configuration col, double val)
template <typename Fn>
static void visit_row(Model model, double J, double t, double U,
                      const std::vector<std::pair<int, int>>& bonds, int n_sites,
                      Configuration x, Fn&& fn) {
    if (model == Model::Heisenberg) {
        double diag = 0.0;
        for (const auto& [i, j] : bonds) {
            const int bi = (x >> i) & 1, bj = (x >> j) & 1;
            if (bi == bj) {
                diag += J / 4;
            } else {
                diag -= J / 4;
                fn(x ^ (Configuration{1} << i) ^ (Configuration{1} << j), J / 2);
            }
        }
        fn(x, diag);
    } else {
        const Configuration site_mask = (Configuration{1} << n_sites) - 1;
        const Configuration up = x & site_mask;
        const Configuration down = x >> n_sites;
        fn(x, U * std::popcount(up & down));
        for (const auto& [i, j] : bonds) {
            for (int off = 0; off < 2; ++off) {
                const int qi = i + off * n_sites, qj = j + off * n_sites;
                if (((x >> qi) & 1) != ((x >> qj) & 1)) {
                    const int lo = std::min(qi, qj), hi = std::max(qi, qj);
                    const double sign =
                        (std::popcount(x & between_mask(lo, hi)) & 1) ? -1.0 : 1.0;
                    fn(x ^ (Configuration{1} << qi) ^ (Configuration{1} << qj), -t * sign);
                }
            }
        }
    }
}

SparseHamiltonian SparseHamiltonian::heisenberg(const Lattice& lattice, double J) {
    if (!std::isfinite(J)) throw HamiltonianError("coupling J must be finite");
    SparseHamiltonian H;
    H.model_ = Model::Heisenberg;
    H.lattice_ = lattice;
    H.n_qubits_ = lattice.sites();
    H.coupling_j_ = J;
    if (H.n_qubits_ > 63) throw HamiltonianError("qubit count exceeds 63-bit capacity");
    H.build_cache();
    return H;
}

SparseHamiltonian SparseHamiltonian::hubbard(const Lattice& lattice, double t, double U, int n_up,
                                             int n_down) {
    const int n = lattice.sites();
    if (n_up < 0 || n_down < 0 || n_up > n || n_down > n)
        throw HamiltonianError("particle numbers out of range");
    SparseHamiltonian H;
    H.model_ = Model::Hubbard;
    H.lattice_ = lattice;
    H.n_qubits_ = 2 * n;
    H.hop_t_ = t;
    H.onsite_u_ = U;
    H.n_up_ = n_up;
    H.n_down_ = n_down;
    if (H.n_qubits_ > 63) throw HamiltonianError("qubit count exceeds 63-bit capacity");
    H.build_cache();
    return H;
}

std::string SparseHamiltonian::model_label() const {
    char buf[96];
    if (model_ == Model::Heisenberg)
        std::snprintf(buf, sizeof buf, "heisenberg(J=%g)", coupling_j_);
    else
        std::snprintf(buf, sizeof buf, "hubbard(t=%g,U=%g)", hop_t_, onsite_u_);
    return buf;
}

void SparseHamiltonian::for_each_in_row(
    Configuration row, const std::function<void(Configuration, double)>& fn) const {
    if (row >= dimension()) throw HamiltonianError("row index out of range");
    visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds, lattice_.sites(),
              row, fn);
}

std::vector<std::pair<Configuration, double>> SparseHamiltonian::row(Configuration r) const {
    std::vector<std::pair<Configuration, double>> out;
    for_each_in_row(r, [&](Configuration c, double v) { out.emplace_back(c, v); });
    std::sort(out.begin(), out.end());
    return out;
}

void SparseHamiltonian::build_cache() {
    if (n_qubits_ > 16) return;
    const std::uint64_t D = dimension();
    cache_ptr_.assign(D + 1, 0);
    for (std::uint64_t r = 0; r < D; ++r) {
        std::uint64_t count = 0;
        visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds,
                  lattice_.sites(), r, [&](Configuration, double) { ++count; });
        cache_ptr_[r + 1] = cache_ptr_[r] + count;
    }
    cache_col_.resize(cache_ptr_[D]);
    cache_val_.resize(cache_ptr_[D]);
    for (std::uint64_t r = 0; r < D; ++r) {
        std::uint64_t at = cache_ptr_[r];
        visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds,
                  lattice_.sites(), r, [&](Configuration c, double v) {
                      cache_col_[at] = static_cast<std::uint32_t>(c);
                      cache_val_[at] = v;
                      ++at;
                  });
        // sorted columns, deterministic accumulation order
        std::vector<std::pair<std::uint32_t, double>> tmp;
        for (std::uint64_t k = cache_ptr_[r]; k < cache_ptr_[r + 1]; ++k)
            tmp.emplace_back(cache_col_[k], cache_val_[k]);
        std::sort(tmp.begin(), tmp.end());
        for (std::uint64_t k = cache_ptr_[r]; k < cache_ptr_[r + 1]; ++k) {
            cache_col_[k] = tmp[k - cache_ptr_[r]].first;
            cache_val_[k] = tmp[k - cache_ptr_[r]].second;
        }
    }
    cached_ = true;
}

std::vector<double> SparseHamiltonian::apply_serial(std::span<const double> x) const {
    const std::uint64_t D = dimension();
    if (x.size() != D) throw HamiltonianError("vector length does not match dimension");
    std::vector<double> y(D, 0.0);
    if (cached_) {
        for (std::uint64_t r = 0; r < D; ++r) {
            double acc = 0.0;
            for (std::uint64_t k = cache_ptr_[r]; k < cache_ptr_[r + 1]; ++k)
                acc += cache_val_[k] * x[cache_col_[k]];
            y[r] = acc;
        }
    } else {
        for (std::uint64_t r = 0; r < D; ++r) {
            double acc = 0.0;
            visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds,
                      lattice_.sites(), r,
                      [&](Configuration c, double v) { acc += v * x[c]; });
            y[r] = acc;
        }
    }
    return y;
}

std::vector<double> SparseHamiltonian::apply(std::span<const double> x) const {
    const std::uint64_t D = dimension();
    if (x.size() != D) throw HamiltonianError("vector length does not match dimension");
    std::vector<double> y(D, 0.0);
    if (cached_) {
#pragma omp parallel for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(D); ++r) {
            double acc = 0.0;
            for (std::uint64_t k = cache_ptr_[r]; k < cache_ptr_[r + 1]; ++k)
                acc += cache_val_[k] * x[cache_col_[k]];
            y[r] = acc;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(D); ++r) {
            double acc = 0.0;
            visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds,
                      lattice_.sites(), static_cast<Configuration>(r),
                      [&](Configuration c, double v) { acc += v * x[c]; });
            y[r] = acc;
        }
    }
    return y;
}

ProjectedMatrix SparseHamiltonian::project(std::span<const Configuration> configs) const {
    const std::uint64_t D = dimension();
    std::unordered_map<Configuration, std::uint32_t> index;
    index.reserve(configs.size() * 2);
    for (std::size_t a = 0; a < configs.size(); ++a) {
        if (configs[a] >= D) throw HamiltonianError("configuration out of range");
        if (!index.emplace(configs[a], static_cast<std::uint32_t>(a)).second)
            throw HamiltonianError("duplicate configuration in subspace");
    }
    ProjectedMatrix M;
    M.size = configs.size();
    M.row_ptr.assign(configs.size() + 1, 0);
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(configs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < static_cast<std::int64_t>(configs.size()); ++a) {
        auto& entries = rows[a];
        visit_row(model_, coupling_j_, hop_t_, onsite_u_, lattice_.bonds,
                  lattice_.sites(), configs[a], [&](Configuration c, double v) {
                      auto it = index.find(c);
                      if (it != index.end()) entries.emplace_back(it->second, v);
                  });
        std::sort(entries.begin(), entries.end());
    }
    for (std::size_t a = 0; a < configs.size(); ++a)
        M.row_ptr[a + 1] = M.row_ptr[a] + rows[a].size();
    M.col.resize(M.row_ptr.back());
    M.val.resize(M.row_ptr.back());
    for (std::size_t a = 0; a < configs.size(); ++a) {
        std::uint64_t at = M.row_ptr[a];
        for (const auto& [c, v] : rows[a]) {
            M.col[at] = c;
            M.val[at] = v;
            ++at;
        }
    }
    return M;
}

std::vector<Configuration> SparseHamiltonian::default_sector_basis() const {
    if (model_ == Model::Heisenberg) return popcount_sector(n_qubits_, n_qubits_ / 2);
    return hubbard_sector(lattice_.sites(), n_up_, n_down_);
}

void SparseHamiltonian::export_triplets(std::ostream& os) const {
    os << "# dim=" << dimension() << " model=" << model_label() << "\n";
    char buf[96];
    for (std::uint64_t r = 0; r < dimension(); ++r) {
        for (const auto& [c, v] : row(r)) {
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%" PRIu64 " %" PRIu64 " %.17g\n", r,
                          static_cast<std::uint64_t>(c), v);
            os << buf;
        }
    }
}

void ProjectedMatrix::apply_serial(std::span<const double> x, std::span<double> y) const {
    for (std::uint64_t r = 0; r < size; ++r) {
        double acc = 0.0;
        for (std::uint64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
        y[r] = acc;
    }
}

void ProjectedMatrix::apply(std::span<const double> x, std::span<double> y) const {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(size); ++r) {
        double acc = 0.0;
        for (std::uint64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
        y[r] = acc;
    }
}

}  // namespace sqd
