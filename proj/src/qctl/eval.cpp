#include "qctl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace quipmc::qctl {

using linalg::CMatrix;
using linalg::Complex;
using linalg::DensityMatrix;
using linalg::Superoperator;
using semantics::Qmc;

namespace {

constexpr double kCompareTol = 1e-9;

double real_trace_product(const CMatrix& rho, const CMatrix& y) {
    // tr(rho * y) without forming the product.
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t j = 0; j < rho.cols(); ++j) acc += rho.at(i, j) * y.at(j, i);
    return acc.real();
}

/// States from which a phi2 state is reachable through phi1 states. States
/// outside this set contribute the zero map to the until fixpoint.
std::vector<bool> eligible_states(const Qmc& chain, const std::vector<bool>& sat1,
                                  const std::vector<bool>& sat2) {
    const std::size_t n = chain.states.size();
    std::vector<std::vector<int>> preds(n);
    for (std::size_t s = 0; s < n; ++s)
        for (const Qmc::Edge& e : chain.edges[s]) preds[e.to].push_back(static_cast<int>(s));

    std::vector<bool> eligible(n, false);
    std::deque<int> work;
    for (std::size_t s = 0; s < n; ++s)
        if (sat2[s]) {
            eligible[s] = true;
            work.push_back(static_cast<int>(s));
        }
    while (!work.empty()) {
        const int t = work.front();
        work.pop_front();
        for (int p : preds[t]) {
            if (eligible[p] || !sat1[p] || sat2[p]) continue;
            eligible[p] = true;
            work.push_back(p);
        }
    }
    return eligible;
}

/// Dual (Heisenberg) iteration for bounded/unbounded until: returns per
/// state Y_s with tr(rho Y_s) = qprob of phi1 U phi2 from s on rho.
std::vector<CMatrix> until_dual(const EvalContext& ctx, const std::vector<bool>& sat1,
                                const std::vector<bool>& sat2, std::optional<long> bound) {
    const Qmc& chain = *ctx.chain;
    const std::size_t n = chain.states.size();
    const CMatrix id = CMatrix::identity(chain.dim);
    const CMatrix zero = CMatrix::zero(chain.dim, chain.dim);

    std::vector<bool> eligible =
        bound ? std::vector<bool>() : eligible_states(chain, sat1, sat2);

    std::vector<CMatrix> y(n, zero);
    for (std::size_t s = 0; s < n; ++s)
        if (sat2[s]) y[s] = id;

    const long iters = bound ? *bound : ctx.max_iters;
    double residual = 0.0;
    for (long it = 0; it < iters; ++it) {
        std::vector<CMatrix> next(n, zero);
        residual = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (sat2[s]) {
                next[s] = id;
                continue;
            }
            if (!sat1[s] || (!bound && !eligible[s])) continue;
            CMatrix acc = zero;
            for (const Qmc::Edge& e : chain.edges[s]) acc += linalg::dual_apply(e.op, y[e.to]);
            residual = std::max(residual, acc.max_diff(y[s]));
            next[s] = std::move(acc);
        }
        y = std::move(next);
        if (!bound && residual < ctx.fixpoint_tol) return y;
    }
    if (!bound && residual >= ctx.fixpoint_tol)
        throw Error(ErrorKind::NonConvergence,
                    "until fixpoint did not converge in " + std::to_string(ctx.max_iters) +
                        " iterations (residual " + std::to_string(residual) + ")");
    return y;
}

std::vector<bool> sat_path_compare(const EvalContext& ctx, const StateFormula& sf);

std::vector<bool> sat_states_impl(const EvalContext& ctx, const StateFormula& sf) {
    const Qmc& chain = *ctx.chain;
    const std::size_t n = chain.states.size();
    std::vector<bool> out(n, false);
    switch (sf.kind) {
        case StateFormula::Kind::True:
            out.assign(n, true);
            return out;
        case StateFormula::Kind::False:
            return out;
        case StateFormula::Kind::AtomVar: {
            const int var = chain.source().var_index(sf.var);
            if (var < 0)
                throw Error(ErrorKind::UnknownVariable,
                            "unknown atom '" + sf.var + "' in property");
            for (std::size_t s = 0; s < n; ++s)
                out[s] = (chain.states[s].env >> var & 1) != 0;
            return out;
        }
        case StateFormula::Kind::AtomState:
            if (sf.state_index >= 0 && sf.state_index < static_cast<long>(n))
                out[sf.state_index] = true;
            return out;
        case StateFormula::Kind::Terminated:
            for (std::size_t s = 0; s < n; ++s) out[s] = chain.state_exited(static_cast<int>(s));
            return out;
        case StateFormula::Kind::Not: {
            out = sat_states_impl(ctx, *sf.lhs);
            out.flip();
            return out;
        }
        case StateFormula::Kind::And: {
            out = sat_states_impl(ctx, *sf.lhs);
            const auto rhs = sat_states_impl(ctx, *sf.rhs);
            for (std::size_t s = 0; s < n; ++s) out[s] = out[s] && rhs[s];
            return out;
        }
        case StateFormula::Kind::QCompare:
            return sat_path_compare(ctx, sf);
    }
    return out;
}

bool compare(Rel rel, double p, double bound) {
    switch (rel) {
        case Rel::Le: return p <= bound + kCompareTol;
        case Rel::Ge: return p >= bound - kCompareTol;
        case Rel::Eq: return std::abs(p - bound) <= kCompareTol;
        case Rel::Lt: return p < bound - kCompareTol;
        case Rel::Gt: return p > bound + kCompareTol;
    }
    return false;
}

/// Per-state probabilities of a path formula for the context's rho0.
std::vector<double> path_probabilities(const EvalContext& ctx, const PathFormula& pf) {
    const Qmc& chain = *ctx.chain;
    const std::size_t n = chain.states.size();
    std::vector<double> probs(n, 0.0);
    if (pf.kind == PathFormula::Kind::Next) {
        const auto target = sat_states_impl(ctx, *pf.arg1);
        for (std::size_t s = 0; s < n; ++s) {
            CMatrix y = CMatrix::zero(chain.dim, chain.dim);
            for (const Qmc::Edge& e : chain.edges[s])
                if (target[e.to]) y += e.op.kraus_sum();
            probs[s] = real_trace_product(ctx.rho0.mat, y);
        }
        return probs;
    }
    const auto sat1 = sat_states_impl(ctx, *pf.arg1);
    const auto sat2 = sat_states_impl(ctx, *pf.arg2);
    const auto y = until_dual(ctx, sat1, sat2, pf.bound);
    for (std::size_t s = 0; s < n; ++s) probs[s] = real_trace_product(ctx.rho0.mat, y[s]);
    return probs;
}

std::vector<bool> sat_path_compare(const EvalContext& ctx, const StateFormula& sf) {
    const auto probs = path_probabilities(ctx, *sf.path);
    std::vector<bool> out(probs.size(), false);
    for (std::size_t s = 0; s < probs.size(); ++s) out[s] = compare(sf.rel, probs[s], sf.bound);
    return out;
}

/// Forward propagation of rho0 until absorption in sat2, restricted to sat1.
DensityMatrix until_forward(const EvalContext& ctx, const std::vector<bool>& sat1,
                            const std::vector<bool>& sat2, std::optional<long> bound) {
    const Qmc& chain = *ctx.chain;
    CMatrix absorbed = CMatrix::zero(chain.dim, chain.dim);

    if (sat2[ctx.start_state]) return DensityMatrix(chain.dim, ctx.rho0.mat);
    if (!sat1[ctx.start_state]) return DensityMatrix(chain.dim, absorbed);

    std::vector<bool> eligible =
        bound ? std::vector<bool>() : eligible_states(chain, sat1, sat2);
    if (!bound && !eligible[ctx.start_state]) return DensityMatrix(chain.dim, absorbed);

    std::map<int, CMatrix> inflight;
    inflight.emplace(ctx.start_state, ctx.rho0.mat);

    const long iters = bound ? *bound : ctx.max_iters;
    for (long it = 0; it < iters && !inflight.empty(); ++it) {
        std::map<int, CMatrix> next;
        for (const auto& [s, rho] : inflight) {
            for (const Qmc::Edge& e : chain.edges[s]) {
                CMatrix moved = linalg::apply(e.op, rho);
                if (sat2[e.to]) {
                    absorbed += moved;
                    continue;
                }
                if (!sat1[e.to]) continue;
                if (!bound && !eligible[e.to]) continue;
                auto it2 = next.find(e.to);
                if (it2 == next.end())
                    next.emplace(e.to, std::move(moved));
                else
                    it2->second += moved;
            }
        }
        inflight = std::move(next);
        if (!bound) {
            double mass = 0.0;
            for (const auto& [s, rho] : inflight) mass += rho.trace().real();
            if (mass < ctx.fixpoint_tol) return DensityMatrix(chain.dim, absorbed);
        }
    }
    if (!bound && !inflight.empty())
        throw Error(ErrorKind::NonConvergence,
                    "reachability mass did not drain in " + std::to_string(ctx.max_iters) +
                        " steps");
    return DensityMatrix(chain.dim, absorbed);
}

}  // namespace

std::vector<bool> sat_states(const EvalContext& ctx, const StateFormula& sf) {
    return sat_states_impl(ctx, sf);
}

Superoperator next_superop(const EvalContext& ctx, const StateFormula& sf, int from) {
    const Qmc& chain = *ctx.chain;
    const auto target = sat_states_impl(ctx, sf);
    Superoperator acc(chain.dim, {});
    for (const Qmc::Edge& e : chain.edges[from])
        if (target[e.to])
            acc.kraus.insert(acc.kraus.end(), e.op.kraus.begin(), e.op.kraus.end());
    if (acc.kraus.empty()) acc.kraus.push_back(CMatrix::zero(chain.dim, chain.dim));
    return acc;
}

Superoperator until_superop(const EvalContext& ctx, const StateFormula& phi1,
                            const StateFormula& phi2, std::optional<long> bound, int from) {
    const Qmc& chain = *ctx.chain;
    const std::size_t n = chain.states.size();
    const auto sat1 = sat_states_impl(ctx, phi1);
    const auto sat2 = sat_states_impl(ctx, phi2);

    // Vectorized edge labels; X_s = [phi2] I + [phi1 & !phi2] sum_t X_t V(s,t).
    const std::size_t vdim = chain.dim * chain.dim;
    std::vector<std::vector<std::pair<int, CMatrix>>> vedges(n);
    for (std::size_t s = 0; s < n; ++s)
        for (const Qmc::Edge& e : chain.edges[s])
            vedges[s].emplace_back(e.to, linalg::vectorize(e.op).mat);

    std::vector<bool> eligible =
        bound ? std::vector<bool>() : eligible_states(chain, sat1, sat2);

    const CMatrix vid = CMatrix::identity(vdim);
    const CMatrix vzero = CMatrix::zero(vdim, vdim);
    std::vector<CMatrix> x(n, vzero);
    for (std::size_t s = 0; s < n; ++s)
        if (sat2[s]) x[s] = vid;

    const long iters = bound ? *bound : ctx.max_iters;
    double residual = 0.0;
    for (long it = 0; it < iters; ++it) {
        std::vector<CMatrix> next(n, vzero);
        residual = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            if (sat2[s]) {
                next[s] = vid;
                continue;
            }
            if (!sat1[s] || (!bound && !eligible[s])) continue;
            CMatrix acc = vzero;
            for (const auto& [to, v] : vedges[s]) acc += x[to] * v;
            residual = std::max(residual, acc.max_diff(x[s]));
            next[s] = std::move(acc);
        }
        x = std::move(next);
        if (!bound && residual < ctx.fixpoint_tol) break;
    }
    if (!bound && residual >= ctx.fixpoint_tol)
        throw Error(ErrorKind::NonConvergence,
                    "until fixpoint did not converge in " + std::to_string(ctx.max_iters) +
                        " iterations (residual " + std::to_string(residual) + ")");

    return linalg::kraus_from_vectorized(linalg::VectorizedSuperop{vdim, x[from]});
}

DensityMatrix qeval(const EvalContext& ctx, const PathFormula& pf) {
    if (pf.kind == PathFormula::Kind::Next) {
        const Superoperator op = next_superop(ctx, *pf.arg1, ctx.start_state);
        return linalg::apply(op, ctx.rho0);
    }
    const auto sat1 = sat_states_impl(ctx, *pf.arg1);
    const auto sat2 = sat_states_impl(ctx, *pf.arg2);
    return until_forward(ctx, sat1, sat2, pf.bound);
}

double qprob(const EvalContext& ctx, const PathFormula& pf) {
    const double p = qeval(ctx, pf).trace_real();
    if (p < -1e-9 || p > 1.0 + 1e-9)
        throw Error(ErrorKind::Internal, "qprob outside [0,1]: " + std::to_string(p));
    return std::clamp(p, 0.0, 1.0);
}

bool check(const EvalContext& ctx, const StateFormula& qcompare) {
    if (qcompare.kind != StateFormula::Kind::QCompare)
        throw Error(ErrorKind::BadArgument, "check expects a Q comparison");
    const double p = qprob(ctx, *qcompare.path);
    return compare(qcompare.rel, p, qcompare.bound);
}

RhoBounds all_rho_bounds(const EvalContext& ctx, const PathFormula& pf) {
    const Qmc& chain = *ctx.chain;
    CMatrix y = CMatrix::zero(chain.dim, chain.dim);
    if (pf.kind == PathFormula::Kind::Next) {
        const auto target = sat_states_impl(ctx, *pf.arg1);
        for (const Qmc::Edge& e : chain.edges[ctx.start_state])
            if (target[e.to]) y += e.op.kraus_sum();
    } else {
        const auto sat1 = sat_states_impl(ctx, *pf.arg1);
        const auto sat2 = sat_states_impl(ctx, *pf.arg2);
        y = until_dual(ctx, sat1, sat2, pf.bound)[ctx.start_state];
    }
    const auto eigs = linalg::hermitian_eigenvalues(y);
    return RhoBounds{eigs.front(), eigs.back()};
}

DensityMatrix reach_exited_density(const Qmc& chain, const DensityMatrix& rho0,
                                   int max_passes) {
    CMatrix absorbed = CMatrix::zero(chain.dim, chain.dim);
    std::map<int, CMatrix> inflight;
    inflight.emplace(0, rho0.mat);

    const std::size_t step_cap = chain.states.size() + 2;
    for (int pass = 1; pass <= std::max(1, max_passes); ++pass) {
        std::map<int, CMatrix> looped;
        std::size_t steps = 0;
        while (!inflight.empty()) {
            if (++steps > step_cap)
                throw Error(ErrorKind::Internal, "pass did not drain; chain is not loop-acyclic");
            std::map<int, CMatrix> next;
            for (const auto& [s, rho] : inflight) {
                if (chain.state_exited(s)) {
                    absorbed += rho;
                    continue;
                }
                for (const Qmc::Edge& e : chain.edges[s]) {
                    CMatrix moved = linalg::apply(e.op, rho);
                    auto& bucket = e.exit_loopback ? looped : next;
                    auto it = bucket.find(e.to);
                    if (it == bucket.end())
                        bucket.emplace(e.to, std::move(moved));
                    else
                        it->second += moved;
                }
            }
            inflight = std::move(next);
        }
        inflight = std::move(looped);
    }
    return DensityMatrix(chain.dim, absorbed);
}

}  // namespace quipmc::qctl
