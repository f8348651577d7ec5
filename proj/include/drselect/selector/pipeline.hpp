#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "drselect/core/config.hpp"
#include "drselect/core/splits.hpp"
#include "drselect/functionals/functional.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/psi_grid.hpp"
#include "drselect/selector/pseudo_risk.hpp"

namespace drselect::selector {

struct PipelineOptions {
    std::size_t S = 3;
    SplitKind split_kind = SplitKind::vfold;
    std::uint64_t seed = 0;
    double M1 = 0.01;
    std::optional<double> M2;
    const FrozenTuning* frozen = nullptr;
};

PipelineOptions pipeline_options(const RunConfig& cfg);

struct CriterionChoice {
    Criterion criterion = Criterion::minimax;
    Selection selection;
    double estimate = 0.0;
};

struct SelectionReport {
    std::string functional;
    SplitScheme splits;
    PsiGrid grid;
    PseudoRiskSurface surface;
    CriterionChoice minimax;
    CriterionChoice mixed;
    NuisanceCache nuisances;

    const CriterionChoice& choice(Criterion c) const { return c == Criterion::minimax ? minimax : mixed; }
};

// Splits, nuisance fits, psi grid, both surfaces and both selections.
SelectionReport run_selection(const Dataset& data, const learners::CandidateLibrary& lib,
                              const functionals::FunctionalDef& def, const PipelineOptions& options);

}  // namespace drselect::selector
