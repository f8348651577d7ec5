#pragma once

#include "drselect/functionals/functional.hpp"
#include "drselect/selector/psi_grid.hpp"
#include "drselect/selector/pseudo_risk.hpp"

namespace drselect::selector {

// Selection with every validation mean replaced by the mean over a large
// independent evaluation sample from the same law.
struct OracleResult {
    PsiGrid grid;
    PseudoRiskSurface surface;
    Selection minimax;
    Selection mixed;

    const Selection& choice(Criterion c) const { return c == Criterion::minimax ? minimax : mixed; }
};

OracleResult oracle_select(const NuisanceCache& nuisances, const Dataset& eval_sample,
                           const functionals::FunctionalDef& def);

}  // namespace drselect::selector
