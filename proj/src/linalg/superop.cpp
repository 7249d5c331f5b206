#include "linalg/superop.hpp"

#include <cmath>

#include "support/error.hpp"

namespace quipmc::linalg {

DensityMatrix DensityMatrix::from_ket(const std::vector<Complex>& psi) {
    CMatrix m(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) m.at(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(psi.size(), std::move(m));
}

DensityMatrix DensityMatrix::basis(std::size_t dim, std::size_t k) {
    if (k >= dim) throw Error(ErrorKind::IndexOutOfRange, "basis state out of range");
    CMatrix m(dim, dim);
    m.at(k, k) = 1.0;
    return DensityMatrix(dim, std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    CMatrix m = CMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim), 0.0};
    return DensityMatrix(dim, std::move(m));
}

void DensityMatrix::validate(double herm_tol, double psd_tol, double trace_tol) const {
    if (mat.rows() != dim || mat.cols() != dim)
        throw Error(ErrorKind::DimensionMismatch, "density matrix shape mismatch");
    if (!mat.is_hermitian(herm_tol))
        throw Error(ErrorKind::BadArgument, "density matrix is not Hermitian");
    const double tr = trace_real();
    if (tr < -trace_tol || tr > 1.0 + trace_tol)
        throw Error(ErrorKind::BadArgument, "density matrix trace outside [0, 1]");
    const auto eigs = hermitian_eigenvalues(mat);
    if (!eigs.empty() && eigs.front() < -psd_tol)
        throw Error(ErrorKind::BadArgument, "density matrix has a negative eigenvalue");
}

Superoperator Superoperator::identity(std::size_t dim) {
    return Superoperator(dim, {CMatrix::identity(dim)});
}

CMatrix Superoperator::kraus_sum() const {
    CMatrix acc(dim, dim);
    for (const auto& k : kraus) acc += k.adjoint() * k;
    return acc;
}

bool Superoperator::approx_equal(const Superoperator& other, double tol) const {
    if (dim != other.dim) return false;
    // Kraus decompositions are not unique; compare as maps.
    return vectorize(*this).mat.max_diff(vectorize(other).mat) <= tol;
}

void Superoperator::validate(double tol) const {
    if (kraus.empty()) throw Error(ErrorKind::BadArgument, "empty Kraus list");
    for (const auto& k : kraus)
        if (k.rows() != dim || k.cols() != dim)
            throw Error(ErrorKind::DimensionMismatch, "Kraus operator shape mismatch");
    const auto eigs = hermitian_eigenvalues(kraus_sum());
    if (!eigs.empty() && eigs.back() > 1.0 + tol)
        throw Error(ErrorKind::BadArgument, "superoperator is trace-increasing");
}

Superoperator unitary_superop(const CMatrix& u, double unitarity_tol) {
    if (!u.is_unitary(unitarity_tol))
        throw Error(ErrorKind::NotUnitary, "matrix is not unitary");
    return Superoperator(u.rows(), {u});
}

std::pair<Superoperator, Superoperator> measure_superops(int k, int num_qubits) {
    if (k < 0 || k >= num_qubits)
        throw Error(ErrorKind::IndexOutOfRange, "measured qubit out of range");
    const std::size_t dim = std::size_t{1} << num_qubits;
    std::pair<Superoperator, Superoperator> out;
    for (int outcome = 0; outcome < 2; ++outcome) {
        CMatrix proj(2, 2);
        proj.at(outcome, outcome) = 1.0;
        Superoperator s(dim, {embed_gate(proj, {k}, num_qubits)});
        (outcome == 0 ? out.first : out.second) = std::move(s);
    }
    return out;
}

CMatrix apply(const Superoperator& s, const CMatrix& rho) {
    if (rho.rows() != s.dim || rho.cols() != s.dim)
        throw Error(ErrorKind::DimensionMismatch, "apply dimension mismatch");
    CMatrix acc(s.dim, s.dim);
    for (const auto& k : s.kraus) acc += k * rho * k.adjoint();
    return acc;
}

DensityMatrix apply(const Superoperator& s, const DensityMatrix& rho) {
    return DensityMatrix(s.dim, apply(s, rho.mat));
}

Superoperator compose(const Superoperator& s2, const Superoperator& s1) {
    if (s1.dim != s2.dim)
        throw Error(ErrorKind::DimensionMismatch, "compose dimension mismatch");
    std::vector<CMatrix> ks;
    for (const auto& k2 : s2.kraus)
        for (const auto& k1 : s1.kraus) {
            CMatrix prod = k2 * k1;
            if (prod.frobenius_norm() < 1e-14) continue;
            ks.push_back(std::move(prod));
        }
    if (ks.empty()) ks.push_back(CMatrix::zero(s1.dim, s1.dim));  // the zero map
    return Superoperator(s1.dim, std::move(ks));
}

Superoperator sum(const Superoperator& s1, const Superoperator& s2) {
    if (s1.dim != s2.dim)
        throw Error(ErrorKind::DimensionMismatch, "sum dimension mismatch");
    std::vector<CMatrix> ks = s1.kraus;
    ks.insert(ks.end(), s2.kraus.begin(), s2.kraus.end());
    return Superoperator(s1.dim, std::move(ks));
}

bool is_trace_preserving(const Superoperator& s, double tol) {
    return s.kraus_sum().max_diff(CMatrix::identity(s.dim)) <= tol;
}

CMatrix vec(const CMatrix& m) {
    CMatrix v(m.rows() * m.cols(), 1);
    for (std::size_t c = 0; c < m.cols(); ++c)
        for (std::size_t r = 0; r < m.rows(); ++r) v.at(c * m.rows() + r, 0) = m.at(r, c);
    return v;
}

CMatrix unvec(const std::vector<Complex>& v, std::size_t dim) {
    if (v.size() != dim * dim)
        throw Error(ErrorKind::DimensionMismatch, "unvec length mismatch");
    CMatrix m(dim, dim);
    for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t r = 0; r < dim; ++r) m.at(r, c) = v[c * dim + r];
    return m;
}

CMatrix unvec(const CMatrix& column, std::size_t dim) {
    if (column.cols() != 1) throw Error(ErrorKind::DimensionMismatch, "unvec expects a column");
    return unvec(column.data(), dim);
}

VectorizedSuperop vectorize(const Superoperator& s) {
    CMatrix acc(s.dim * s.dim, s.dim * s.dim);
    for (const auto& k : s.kraus) acc += kron(k.conj(), k, kDimensionCap);
    return VectorizedSuperop{s.dim * s.dim, std::move(acc)};
}

Superoperator kraus_from_vectorized(const VectorizedSuperop& v, double cutoff) {
    std::size_t dim = 0;
    while (dim * dim < v.dim) ++dim;
    if (dim * dim != v.dim || v.mat.rows() != v.dim || v.mat.cols() != v.dim)
        throw Error(ErrorKind::DimensionMismatch, "vectorized map has non-square base dimension");

    // Choi matrix via index reshuffle: with vec index (c*dim + r),
    // J[(i,r),(j,c)] = M[(c,r),(j,i)].
    CMatrix choi(v.dim, v.dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t j = 0; j < dim; ++j)
                for (std::size_t c = 0; c < dim; ++c)
                    choi.at(i * dim + r, j * dim + c) = v.mat.at(c * dim + r, j * dim + i);

    const EigenSystem es = hermitian_eigensystem(choi);
    std::vector<CMatrix> ks;
    for (std::size_t e = 0; e < es.values.size(); ++e) {
        const double lambda = es.values[e];
        if (lambda <= cutoff) continue;
        const double w = std::sqrt(lambda);
        CMatrix k(dim, dim);
        for (std::size_t c = 0; c < dim; ++c)
            for (std::size_t r = 0; r < dim; ++r)
                k.at(r, c) = w * es.vectors.at(c * dim + r, e);
        ks.push_back(std::move(k));
    }
    if (ks.empty()) ks.push_back(CMatrix::zero(dim, dim));
    return Superoperator(dim, std::move(ks));
}

CMatrix dual_apply(const Superoperator& s, const CMatrix& y) {
    if (y.rows() != s.dim || y.cols() != s.dim)
        throw Error(ErrorKind::DimensionMismatch, "dual_apply dimension mismatch");
    CMatrix acc(s.dim, s.dim);
    for (const auto& k : s.kraus) acc += k.adjoint() * y * k;
    return acc;
}

}  // namespace quipmc::linalg
