#pragma once

#include <vector>

#include "drselect/core/config.hpp"
#include "drselect/learners/learner.hpp"

namespace drselect::learners {

// C_p (propensity learners, index k) and C_b (outcome learners, index l).
struct CandidateLibrary {
    std::vector<LearnerSpec> propensity;
    std::vector<LearnerSpec> outcome;

    std::size_t K() const noexcept { return propensity.size(); }
    std::size_t L() const noexcept { return outcome.size(); }
    void validate() const;
};

// l1_logistic, random_forest_cls, gbt_cls for p; l1_linear, random_forest_reg,
// gbt_reg for b.
CandidateLibrary default_library();

// Reads `learner.p.<i> = family`, `learner.b.<i> = family`, optional
// `label.p.<i> = text`, `grid.p.<i>.<param> = v1,v2,...` and
// `grid.p.<i>.folds = k` (same for b). Indices start at 1 and must be
// contiguous. Falls back to default_library() when no learner keys exist.
CandidateLibrary library_from(const KeyValueConfig& kv);

}  // namespace drselect::learners
