#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chainscope/errors.hpp"
#include "chainscope/rng.hpp"

namespace chainscope {

/// Ground-truth nearest-neighbour chain: site energies and bond couplings.
///
/// Couplings must be strictly positive. A zero bond cuts the chain, and the
/// end-site spectrum then carries no information past it.
class ChainSpec {
public:
    ChainSpec(std::vector<double> energies, std::vector<double> couplings)
        : energies_(std::move(energies)), couplings_(std::move(couplings)) {
        if (energies_.empty()) throw ValidationError("ChainSpec: n_sites must be positive");
        if (couplings_.size() + 1 != energies_.size()) {
            throw ValidationError("ChainSpec: expected " + std::to_string(energies_.size() - 1) +
                                  " couplings for " + std::to_string(energies_.size()) +
                                  " sites, got " + std::to_string(couplings_.size()));
        }
        for (std::size_t i = 0; i < energies_.size(); ++i) {
            if (!std::isfinite(energies_[i])) {
                throw ValidationError("ChainSpec: energy " + std::to_string(i + 1) + " is not finite");
            }
        }
        for (std::size_t i = 0; i < couplings_.size(); ++i) {
            if (!(couplings_[i] > 0.0) || !std::isfinite(couplings_[i])) {
                throw ValidationError("ChainSpec: coupling J(" + std::to_string(i + 1) + "," +
                                      std::to_string(i + 2) + ") must be finite and > 0");
            }
        }
    }

    /// Homogeneous chain with all energies `epsilon` and all couplings `j`.
    static ChainSpec homogeneous(std::size_t n_sites, double epsilon, double j) {
        if (n_sites == 0) throw ValidationError("ChainSpec: n_sites must be positive");
        return ChainSpec(std::vector<double>(n_sites, epsilon), std::vector<double>(n_sites - 1, j));
    }

    std::size_t n_sites() const noexcept { return energies_.size(); }
    const std::vector<double>& energies() const noexcept { return energies_; }
    const std::vector<double>& couplings() const noexcept { return couplings_; }

    friend bool operator==(const ChainSpec&, const ChainSpec&) = default;

private:
    std::vector<double> energies_;
    std::vector<double> couplings_;
};

/// Symmetric tridiagonal matrix; only one off-diagonal is stored.
template <class Real = double>
struct TridiagonalMatrix {
    std::vector<Real> diagonal;
    std::vector<Real> off_diagonal;

    TridiagonalMatrix() = default;
    TridiagonalMatrix(std::vector<Real> diag, std::vector<Real> off)
        : diagonal(std::move(diag)), off_diagonal(std::move(off)) {
        if (diagonal.empty() || off_diagonal.size() + 1 != diagonal.size()) {
            throw ValidationError("TridiagonalMatrix: need N diagonal and N-1 off-diagonal entries");
        }
    }

    std::size_t size() const noexcept { return diagonal.size(); }

    /// Dense row-major copy, mostly for tests.
    std::vector<std::vector<Real>> dense() const {
        const std::size_t n = size();
        std::vector<std::vector<Real>> out(n, std::vector<Real>(n, Real(0)));
        for (std::size_t i = 0; i < n; ++i) out[i][i] = diagonal[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            out[i][i + 1] = off_diagonal[i];
            out[i + 1][i] = off_diagonal[i];
        }
        return out;
    }

    /// Infinity norm (max absolute row sum).
    Real norm_inf() const {
        using std::abs;
        Real best(0);
        for (std::size_t i = 0; i < size(); ++i) {
            Real row = abs(diagonal[i]);
            if (i > 0) row += abs(off_diagonal[i - 1]);
            if (i + 1 < size()) row += abs(off_diagonal[i]);
            if (row > best) best = row;
        }
        return best;
    }
};

/// Hamiltonian of the chain; entries are copied (and converted to Real) verbatim.
template <class Real = double>
TridiagonalMatrix<Real> build_hamiltonian(const ChainSpec& spec) {
    TridiagonalMatrix<Real> h;
    h.diagonal.assign(spec.energies().begin(), spec.energies().end());
    h.off_diagonal.assign(spec.couplings().begin(), spec.couplings().end());
    return h;
}

/// Effective site energies of the single-excitation sector of the
/// anisotropic Heisenberg chain:
///   eps_i = delta * (sum_j J_{j,j+1} - 2 (J_{i,i+1} + J_{i-1,i})),
/// with J_{0,1} = J_{N,N+1} = 0.
inline std::vector<double> heisenberg_site_energies(const std::vector<double>& couplings, double delta) {
    if (couplings.empty()) throw ValidationError("heisenberg_site_energies: couplings must be nonempty");
    double total = 0.0;
    for (double j : couplings) total += j;
    const std::size_t n = couplings.size() + 1;
    std::vector<double> energies(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double right = i < couplings.size() ? couplings[i] : 0.0;
        const double left = i > 0 ? couplings[i - 1] : 0.0;
        energies[i] = delta * (total - 2.0 * (right + left));
    }
    return energies;
}

/// Chain with couplings drawn i.i.d. uniform on [j_low, j_high] from the
/// Philox stream keyed by `seed`.
inline ChainSpec random_chain(std::size_t n_sites, double j_low, double j_high, std::vector<double> energies,
                              std::uint64_t seed) {
    if (!(j_low > 0.0)) throw ValidationError("random_chain: j_low must be > 0 (a zero bond breaks the chain)");
    if (!(j_low <= j_high)) throw ValidationError("random_chain: need j_low <= j_high");
    if (n_sites == 0) throw ValidationError("random_chain: n_sites must be positive");
    if (energies.size() != n_sites) throw ValidationError("random_chain: energies must have n_sites entries");
    Philox4x32 engine(derive_stream_key(seed, 0));
    std::vector<double> couplings(n_sites - 1);
    for (auto& j : couplings) j = uniform_in(engine, j_low, j_high);
    return ChainSpec(std::move(energies), std::move(couplings));
}

}  // namespace chainscope
