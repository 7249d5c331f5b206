#include "frontend/gates.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace quipmc::frontend {

namespace {

using linalg::CMatrix;
using linalg::Complex;

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    return CMatrix(2, 2, {a, b, c, d});
}

CMatrix permutation4(int p0, int p1, int p2, int p3) {
    CMatrix m(4, 4);
    const int perm[4] = {p0, p1, p2, p3};
    for (int col = 0; col < 4; ++col) m.at(perm[col], col) = 1.0;
    return m;
}

std::vector<GateRef> make_builtins() {
    const double rs2 = 1.0 / std::sqrt(2.0);
    std::vector<GateRef> g;
    auto add = [&](std::string name, int arity, CMatrix m) {
        g.push_back(GateRef{std::move(name), arity, std::move(m), true});
    };

    add("X", 1, mat2(0, 1, 1, 0));
    add("Y", 1, mat2(0, Complex{0, -1}, Complex{0, 1}, 0));
    add("Z", 1, mat2(1, 0, 0, -1));
    add("H", 1, mat2(rs2, rs2, rs2, -rs2));
    add("S", 1, mat2(1, 0, 0, Complex{0, 1}));
    add("T", 1, mat2(1, 0, 0, Complex{rs2, rs2}));

    // Control is the first target.
    add("CNOT", 2, permutation4(0, 1, 3, 2));
    CMatrix cz = CMatrix::identity(4);
    cz.at(3, 3) = -1.0;
    add("CZ", 2, std::move(cz));
    add("SWAP", 2, permutation4(0, 2, 1, 3));

    CMatrix toffoli = CMatrix::identity(8);
    toffoli.at(6, 6) = 0.0;
    toffoli.at(7, 7) = 0.0;
    toffoli.at(6, 7) = 1.0;
    toffoli.at(7, 6) = 1.0;
    add("Toffoli", 3, std::move(toffoli));

    return g;
}

}  // namespace

const std::vector<GateRef>& builtin_gates() {
    static const std::vector<GateRef> gates = make_builtins();
    return gates;
}

std::optional<std::string> resolve_builtin_name(const std::string& surface) {
    std::string lower = surface;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.rfind("gate_", 0) == 0) lower = lower.substr(5);

    static const std::map<std::string, std::string> aliases = {
        {"x", "X"},       {"not", "X"},     {"y", "Y"},        {"z", "Z"},
        {"h", "H"},       {"hadamard", "H"}, {"s", "S"},       {"t", "T"},
        {"cnot", "CNOT"}, {"cx", "CNOT"},   {"cz", "CZ"},      {"swap", "SWAP"},
        {"toffoli", "Toffoli"}, {"ccx", "Toffoli"},
    };
    auto it = aliases.find(lower);
    if (it == aliases.end()) return std::nullopt;
    return it->second;
}

}  // namespace quipmc::frontend
