#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace quipmc::linalg {

using Complex = std::complex<double>;

/// Default cap on matrix dimensions produced by kron/embedding (2^10: ten
/// qubits, the largest register any supported experiment needs).
inline constexpr std::size_t kDimensionCap = 1024;

/// Dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix zero(std::size_t rows, std::size_t cols);
    /// Column vector |k> of dimension dim.
    static CMatrix basis_ket(std::size_t dim, std::size_t k);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Complex>& data() const { return data_; }
    std::vector<Complex>& data() { return data_; }

    CMatrix adjoint() const;
    CMatrix transpose() const;
    CMatrix conj() const;
    Complex trace() const;

    CMatrix operator+(const CMatrix& other) const;
    CMatrix operator-(const CMatrix& other) const;
    CMatrix operator*(const CMatrix& other) const;
    CMatrix operator*(Complex scalar) const;
    CMatrix& operator+=(const CMatrix& other);

    /// Largest absolute entry.
    double max_norm() const;
    double frobenius_norm() const;
    /// Largest absolute entrywise difference; matrices must be same shape.
    double max_diff(const CMatrix& other) const;
    bool approx_equal(const CMatrix& other, double tol) const;

    bool is_hermitian(double tol) const;
    bool is_unitary(double tol) const;

    std::string to_string(int precision = 6) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Kronecker product a (x) b. Throws DimensionCap if either result axis
/// exceeds `cap`.
CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t cap = kDimensionCap);

/// Matrix-vector product treating `v` as a column vector.
std::vector<Complex> mat_vec(const CMatrix& m, const std::vector<Complex>& v);

/// Extends gate `u` (dimension 2^j) to the full register of n qubits, acting
/// on `targets` in the given order. Qubit 0 is the most significant tensor
/// factor; register order is preserved on output.
CMatrix embed_gate(const CMatrix& u, const std::vector<int>& targets, int num_qubits);

/// Partial trace keeping the qubits in `keep` (ascending order in the
/// output), tracing out the rest.
CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& keep, int num_qubits);

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi; intended for
/// the modest dimensions this project needs.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Full Hermitian eigendecomposition: m = V diag(w) V^dagger.
struct EigenSystem {
    std::vector<double> values;  // ascending
    CMatrix vectors;             // columns are eigenvectors
};
EigenSystem hermitian_eigensystem(const CMatrix& m);

}  // namespace quipmc::linalg
