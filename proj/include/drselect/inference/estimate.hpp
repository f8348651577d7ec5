#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/inference/bootstrap.hpp"
#include "drselect/inference/smooth_max.hpp"
#include "drselect/learners/library.hpp"
#include "drselect/selector/pipeline.hpp"

namespace drselect::inference {

struct CriterionEstimate {
    Criterion criterion = Criterion::minimax;
    selector::Selection selection;
    double estimate = 0.0;
    TauChoice tau;
    SmoothMaxResult smooth;
    std::optional<BootstrapResult> bootstrap;
};

struct EstimateReport {
    selector::SelectionReport selection;
    std::vector<CriterionEstimate> criteria;
    std::vector<std::string> notes;
};

std::vector<Criterion> expand_criterion(Criterion c);

// tau from the config (explicit tau, else log(m)/epsilon, else default_tau).
TauChoice resolve_tau(const RunConfig& cfg, std::size_t K, std::size_t L, Criterion criterion);

EstimateReport run_estimate(const Dataset& data, const learners::CandidateLibrary& lib, const RunConfig& cfg,
                            const BootstrapPlan& plan = {});

}  // namespace drselect::inference
