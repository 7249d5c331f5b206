#include "linalg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "support/error.hpp"

namespace quipmc::linalg {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorKind::DimensionMismatch,
                    "matrix entry count does not match " + std::to_string(rows_) + "x" +
                        std::to_string(cols_));
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::zero(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

CMatrix CMatrix::basis_ket(std::size_t dim, std::size_t k) {
    if (k >= dim) throw Error(ErrorKind::IndexOutOfRange, "basis index out of range");
    CMatrix m(dim, 1);
    m.at(k, 0) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = std::conj(at(i, j));
    return r;
}

CMatrix CMatrix::transpose() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

CMatrix CMatrix::conj() const {
    CMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = std::conj(data_[i]);
    return r;
}

Complex CMatrix::trace() const {
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
    return t;
}

CMatrix CMatrix::operator+(const CMatrix& other) const {
    CMatrix r = *this;
    r += other;
    return r;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorKind::DimensionMismatch, "matrix addition shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

CMatrix CMatrix::operator-(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorKind::DimensionMismatch, "matrix subtraction shape mismatch");
    CMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - other.data_[i];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& other) const {
    if (cols_ != other.rows_)
        throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
    CMatrix r(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex a = at(i, k);
            if (a == Complex{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                r.at(i, j) += a * other.at(k, j);
            }
        }
    }
    return r;
}

CMatrix CMatrix::operator*(Complex scalar) const {
    CMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * scalar;
    return r;
}

double CMatrix::max_norm() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double CMatrix::max_diff(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorKind::DimensionMismatch, "max_diff shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
}

bool CMatrix::approx_equal(const CMatrix& other, double tol) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && max_diff(other) <= tol;
}

bool CMatrix::is_hermitian(double tol) const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i; j < cols_; ++j)
            if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
    return true;
}

bool CMatrix::is_unitary(double tol) const {
    if (!is_square()) return false;
    return (*this * adjoint()).max_diff(identity(rows_)) <= tol;
}

std::string CMatrix::to_string(int precision) const {
    std::ostringstream os;
    os.precision(precision);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const Complex& z = at(i, j);
            os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            if (j + 1 < cols_) os << ", ";
        }
        if (i + 1 < rows_) os << "\n";
    }
    return os.str();
}

CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t cap) {
    if (a.rows() * b.rows() > cap || a.cols() * b.cols() > cap) {
        throw Error(ErrorKind::DimensionCap,
                    "kron result exceeds dimension cap " + std::to_string(cap));
    }
    CMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const Complex f = a.at(ia, ja);
            if (f == Complex{0.0, 0.0}) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r.at(ia * b.rows() + ib, ja * b.cols() + jb) = f * b.at(ib, jb);
        }
    return r;
}

std::vector<Complex> mat_vec(const CMatrix& m, const std::vector<Complex>& v) {
    if (m.cols() != v.size())
        throw Error(ErrorKind::DimensionMismatch, "mat_vec shape mismatch");
    std::vector<Complex> out(m.rows(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex s{0.0, 0.0};
        for (std::size_t j = 0; j < m.cols(); ++j) s += m.at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

namespace {

// Reorders the n-qubit basis index so the target qubits (in their given
// order) come first, followed by the remaining qubits in ascending order.
// Qubit 0 holds the most significant bit of the index.
struct QubitSplit {
    std::vector<int> targets;
    std::vector<int> rest;
    int n;

    std::size_t gate_part(std::size_t idx) const {
        std::size_t a = 0;
        for (int q : targets) a = (a << 1) | ((idx >> (n - 1 - q)) & 1u);
        return a;
    }
    std::size_t rest_part(std::size_t idx) const {
        std::size_t b = 0;
        for (int q : rest) b = (b << 1) | ((idx >> (n - 1 - q)) & 1u);
        return b;
    }
};

}  // namespace

CMatrix embed_gate(const CMatrix& u, const std::vector<int>& targets, int num_qubits) {
    if (!u.is_square())
        throw Error(ErrorKind::DimensionMismatch, "gate matrix must be square");
    std::size_t j = targets.size();
    if (u.rows() != (std::size_t{1} << j))
        throw Error(ErrorKind::DimensionMismatch,
                    "gate dimension does not match target count");
    if (num_qubits <= 0 || (std::size_t{1} << num_qubits) > kDimensionCap)
        throw Error(ErrorKind::DimensionCap, "register exceeds dimension cap");

    std::vector<bool> seen(num_qubits, false);
    for (int t : targets) {
        if (t < 0 || t >= num_qubits)
            throw Error(ErrorKind::IndexOutOfRange, "gate target out of range");
        if (seen[t]) throw Error(ErrorKind::DuplicateTarget, "duplicate gate target");
        seen[t] = true;
    }

    QubitSplit split;
    split.targets = targets;
    split.n = num_qubits;
    for (int q = 0; q < num_qubits; ++q)
        if (!seen[q]) split.rest.push_back(q);

    const std::size_t dim = std::size_t{1} << num_qubits;
    CMatrix r(dim, dim);
    for (std::size_t row = 0; row < dim; ++row) {
        const std::size_t ar = split.gate_part(row);
        const std::size_t br = split.rest_part(row);
        for (std::size_t col = 0; col < dim; ++col) {
            if (split.rest_part(col) != br) continue;  // identity on untouched qubits
            r.at(row, col) = u.at(ar, split.gate_part(col));
        }
    }
    return r;
}

CMatrix partial_trace(const CMatrix& rho, const std::vector<int>& keep, int num_qubits) {
    if (rho.rows() != rho.cols() || rho.rows() != (std::size_t{1} << num_qubits))
        throw Error(ErrorKind::DimensionMismatch, "partial_trace dimension mismatch");
    std::vector<bool> keep_mask(num_qubits, false);
    for (int q : keep) {
        if (q < 0 || q >= num_qubits)
            throw Error(ErrorKind::IndexOutOfRange, "partial_trace qubit out of range");
        keep_mask[q] = true;
    }
    std::vector<int> kept, traced;
    for (int q = 0; q < num_qubits; ++q) (keep_mask[q] ? kept : traced).push_back(q);

    const std::size_t kd = std::size_t{1} << kept.size();
    const std::size_t td = std::size_t{1} << traced.size();
    auto assemble = [&](std::size_t kbits, std::size_t tbits) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < kept.size(); ++i) {
            std::size_t bit = (kbits >> (kept.size() - 1 - i)) & 1u;
            idx |= bit << (num_qubits - 1 - kept[i]);
        }
        for (std::size_t i = 0; i < traced.size(); ++i) {
            std::size_t bit = (tbits >> (traced.size() - 1 - i)) & 1u;
            idx |= bit << (num_qubits - 1 - traced[i]);
        }
        return idx;
    };

    CMatrix out(kd, kd);
    for (std::size_t r = 0; r < kd; ++r)
        for (std::size_t c = 0; c < kd; ++c) {
            Complex s{0.0, 0.0};
            for (std::size_t t = 0; t < td; ++t) s += rho.at(assemble(r, t), assemble(c, t));
            out.at(r, c) = s;
        }
    return out;
}

EigenSystem hermitian_eigensystem(const CMatrix& m) {
    if (!m.is_square())
        throw Error(ErrorKind::DimensionMismatch, "eigensystem requires square matrix");
    const std::size_t n = m.rows();
    CMatrix a = m;
    CMatrix v = CMatrix::identity(n);

    // Cyclic Jacobi with complex 2x2 rotations.
    const int max_sweeps = 60;
    double scale = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) scale += std::norm(m.data()[i]);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
        if (off <= 1e-28 * std::max(1.0, scale)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                // Phase that makes the off-diagonal real, then a real rotation.
                const Complex phase = apq / std::abs(apq);
                const double g = std::abs(apq);
                const double theta = 0.5 * std::atan2(2.0 * g, app - aqq);
                const double c = std::cos(theta);
                const Complex s = std::sin(theta) * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a.at(k, p);
                    const Complex akq = a.at(k, q);
                    a.at(k, p) = c * akp + std::conj(s) * akq;
                    a.at(k, q) = -s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a.at(p, k);
                    const Complex aqk = a.at(q, k);
                    a.at(p, k) = c * apk + s * aqk;
                    a.at(q, k) = -std::conj(s) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v.at(k, p);
                    const Complex vkq = v.at(k, q);
                    v.at(k, p) = c * vkp + std::conj(s) * vkq;
                    v.at(k, q) = -s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a.at(x, x).real() < a.at(y, y).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = CMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        es.values[i] = a.at(order[i], order[i]).real();
        for (std::size_t k = 0; k < n; ++k) es.vectors.at(k, i) = v.at(k, order[i]);
    }
    return es;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
    return hermitian_eigensystem(m).values;
}

}  // namespace quipmc::linalg
