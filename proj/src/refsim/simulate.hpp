#pragma once

#include <vector>

#include "frontend/validate.hpp"
#include "linalg/superop.hpp"
#include "semantics/chain.hpp"

namespace quipmc::refsim {

enum class BranchStatus { Terminated, Residual };

/// One measurement branch of a state-vector run: the normalized state, its
/// probability mass, the classical environment and how many body passes it
/// took.
struct Branch {
    double weight = 0.0;
    std::vector<linalg::Complex> state;
    semantics::Env env = 0;
    int loops = 0;  // body passes executed
    BranchStatus status = BranchStatus::Terminated;
};

struct SimResult {
    std::vector<Branch> branches;  // deterministic order: depth-first, 0-outcome first
    double terminated_mass = 0.0;
    double residual_mass = 0.0;
};

inline constexpr std::size_t kDefaultBranchCap = 1 << 16;

/// Exhaustive branch enumeration of a program run from `psi0` (normalized).
/// Reset is executed as measure-then-conditionally-X; a loop-back resets the
/// environment to all-zero. Branches still looping after `max_loops` body
/// passes are reported as residual mass.
SimResult simulate(const frontend::CheckedProgram& program,
                   std::vector<linalg::Complex> psi0, int max_loops,
                   std::size_t branch_cap = kDefaultBranchCap);

/// Mixture of the terminated branches: sum of weight * |psi><psi|. The trace
/// equals the terminated mass.
linalg::DensityMatrix branch_density(const std::vector<Branch>& branches);

}  // namespace quipmc::refsim
