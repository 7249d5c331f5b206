#include "support/init_spec.hpp"

#include <cctype>
#include <cstdlib>

#include "support/error.hpp"

namespace quipmc {

using linalg::CMatrix;
using linalg::Complex;
using linalg::DensityMatrix;

namespace {

std::size_t ket_index(const std::string& spec, std::size_t dim) {
    // |b1...bn> with the first bit on the most significant qubit.
    if (spec.size() < 3 || spec.front() != '|' || spec.back() != '>')
        throw Error(ErrorKind::BadArgument, "malformed ket '" + spec + "'");
    std::size_t idx = 0;
    std::size_t bits = 0;
    for (std::size_t i = 1; i + 1 < spec.size(); ++i) {
        const char c = spec[i];
        if (c != '0' && c != '1')
            throw Error(ErrorKind::BadArgument, "ket digits must be 0 or 1");
        idx = (idx << 1) | static_cast<std::size_t>(c - '0');
        ++bits;
    }
    if ((std::size_t{1} << bits) != dim)
        throw Error(ErrorKind::DimensionMismatch,
                    "ket has " + std::to_string(bits) + " qubits, expected dimension " +
                        std::to_string(dim));
    return idx;
}

CMatrix parse_matrix_literal(const std::string& text) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto bare_number = [&]() {
        std::size_t start = i;
        while (i < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
            ++i;
        if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
            ++i;
            if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
        if (i == start)
            throw Error(ErrorKind::BadArgument, "matrix literal: expected a number");
        return std::strtod(text.substr(start, i - start).c_str(), nullptr);
    };
    // (value, is_imaginary) for a signed term: number, number followed by
    // `i`, or a bare signed `i`.
    auto signed_part = [&]() {
        skip();
        double sign = 1.0;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            if (text[i] == '-') sign = -1.0;
            ++i;
            skip();
        }
        if (i < text.size() && text[i] == 'i') {
            ++i;
            return std::make_pair(sign, true);
        }
        const double v = bare_number();
        if (i < text.size() && text[i] == 'i') {
            ++i;
            return std::make_pair(sign * v, true);
        }
        return std::make_pair(sign * v, false);
    };
    auto complex_value = [&]() {
        auto [v1, imag1] = signed_part();
        if (imag1) return Complex{0.0, v1};
        skip();
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            auto [v2, imag2] = signed_part();
            if (!imag2)
                throw Error(ErrorKind::BadArgument,
                            "matrix literal: second term must be imaginary");
            return Complex{v1, v2};
        }
        return Complex{v1, 0.0};
    };

    skip();
    if (i >= text.size() || text[i] != '[')
        throw Error(ErrorKind::BadArgument, "matrix literal must start with '['");
    ++i;
    std::vector<std::vector<Complex>> rows;
    rows.emplace_back();
    while (true) {
        skip();
        if (i >= text.size())
            throw Error(ErrorKind::BadArgument, "unterminated matrix literal");
        if (text[i] == ']') {
            ++i;
            break;
        }
        if (text[i] == ',') {
            ++i;
            continue;
        }
        if (text[i] == ';') {
            ++i;
            rows.emplace_back();
            continue;
        }
        rows.back().push_back(complex_value());
    }
    if (rows.back().empty() && rows.size() > 1) rows.pop_back();
    const std::size_t cols = rows.front().size();
    std::vector<Complex> entries;
    for (const auto& r : rows) {
        if (r.size() != cols)
            throw Error(ErrorKind::BadArgument, "ragged matrix literal");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return CMatrix(rows.size(), cols, std::move(entries));
}

}  // namespace

DensityMatrix parse_init_density(const std::string& spec, std::size_t dim) {
    if (spec.empty()) return DensityMatrix::basis(dim, 0);
    if (spec == "maxmixed") return DensityMatrix::maximally_mixed(dim);
    if (spec.rfind("matrix:", 0) == 0) {
        CMatrix m = parse_matrix_literal(spec.substr(7));
        if (m.rows() != dim || m.cols() != dim)
            throw Error(ErrorKind::DimensionMismatch,
                        "initial matrix has dimension " + std::to_string(m.rows()) +
                            ", expected " + std::to_string(dim));
        DensityMatrix rho(dim, std::move(m));
        rho.validate();
        return rho;
    }
    return DensityMatrix::basis(dim, ket_index(spec, dim));
}

std::vector<Complex> parse_init_ket(const std::string& spec, std::size_t dim) {
    std::vector<Complex> psi(dim, Complex{0.0, 0.0});
    if (spec.empty()) {
        psi[0] = 1.0;
        return psi;
    }
    if (spec == "maxmixed")
        throw Error(ErrorKind::BadArgument,
                    "the simulator needs a pure state; 'maxmixed' is not one");
    if (spec.rfind("matrix:", 0) == 0)
        throw Error(ErrorKind::BadArgument,
                    "the simulator needs a ket, not a density matrix");
    psi[ket_index(spec, dim)] = 1.0;
    return psi;
}

}  // namespace quipmc
