#pragma once

#include <utility>
#include <vector>

#include "linalg/matrix.hpp"

namespace quipmc::linalg {

/// Possibly sub-normalized quantum state: Hermitian, positive semidefinite,
/// trace in [0, 1]. Sub-normalized states arise along measurement branches.
struct DensityMatrix {
    std::size_t dim = 0;
    CMatrix mat;

    DensityMatrix() = default;
    DensityMatrix(std::size_t d, CMatrix m) : dim(d), mat(std::move(m)) {}

    static DensityMatrix from_ket(const std::vector<Complex>& psi);
    static DensityMatrix basis(std::size_t dim, std::size_t k);
    static DensityMatrix maximally_mixed(std::size_t dim);

    double trace_real() const { return mat.trace().real(); }

    /// Checks the density-matrix invariants (Hermitian within hermTol,
    /// eigenvalues >= -psdTol, trace <= 1 + traceTol). Throws on violation.
    void validate(double herm_tol = 1e-10, double psd_tol = 1e-9,
                  double trace_tol = 1e-10) const;
};

/// Completely positive, trace-non-increasing map in Kraus form. Complete
/// positivity is free by construction; trace-non-increase is checked by
/// validate().
struct Superoperator {
    std::size_t dim = 0;
    std::vector<CMatrix> kraus;

    Superoperator() = default;
    Superoperator(std::size_t d, std::vector<CMatrix> k) : dim(d), kraus(std::move(k)) {}

    static Superoperator identity(std::size_t dim);

    /// Sum of K_i^dagger K_i.
    CMatrix kraus_sum() const;
    bool approx_equal(const Superoperator& other, double tol) const;
    void validate(double tol = 1e-9) const;
};

/// Matrix form acting on the column-stacked vec(rho); convention fixed
/// repo-wide as vec index = col * dim + row.
struct VectorizedSuperop {
    std::size_t dim = 0;  // 4^n for an n-qubit map
    CMatrix mat;
};

Superoperator unitary_superop(const CMatrix& u, double unitarity_tol = 1e-10);

/// Measurement pair (M0, M1) for qubit k of an n-qubit register; Kraus
/// operators are the embedded projectors |i><i| on qubit k.
std::pair<Superoperator, Superoperator> measure_superops(int k, int num_qubits);

DensityMatrix apply(const Superoperator& s, const DensityMatrix& rho);
CMatrix apply(const Superoperator& s, const CMatrix& rho);

/// Composition s2 after s1; Kraus set {K2_i K1_j} with near-zero operators
/// dropped (Frobenius norm < 1e-14).
Superoperator compose(const Superoperator& s2, const Superoperator& s1);
Superoperator sum(const Superoperator& s1, const Superoperator& s2);

bool is_trace_preserving(const Superoperator& s, double tol);

VectorizedSuperop vectorize(const Superoperator& s);
CMatrix vec(const CMatrix& m);
CMatrix unvec(const std::vector<Complex>& v, std::size_t dim);
CMatrix unvec(const CMatrix& column, std::size_t dim);

/// Recovers a Kraus list from a vectorized CP map via its Choi matrix.
/// Eigenvalues below `cutoff` are discarded.
Superoperator kraus_from_vectorized(const VectorizedSuperop& v, double cutoff = 1e-12);

/// Heisenberg-picture action: sum_i K_i^dagger Y K_i. The dual satisfies
/// tr(E(rho) Y) = tr(rho E*(Y)).
CMatrix dual_apply(const Superoperator& s, const CMatrix& y);

}  // namespace quipmc::linalg
