#include "drselect/selector/oracle.hpp"

namespace drselect::selector {

OracleResult oracle_select(const NuisanceCache& nuisances, const Dataset& eval_sample,
                           const functionals::FunctionalDef& def) {
    OracleResult r;
    const std::vector<std::size_t> rows = all_rows(eval_sample.n());
    const std::vector<std::vector<std::size_t>> per_split(nuisances.propensity.size(), rows);
    r.grid = evaluate_grid(nuisances, def, eval_sample, per_split);
    r.grid.check_finite();
    r.surface = compute_surface(r.grid);
    r.minimax = select(r.surface, Criterion::minimax);
    r.mixed = select(r.surface, Criterion::mixed_minimax);
    return r;
}

}  // namespace drselect::selector
