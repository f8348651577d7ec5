#include "drselect/selector/pipeline.hpp"

#include "drselect/core/seed.hpp"

namespace drselect::selector {

PipelineOptions pipeline_options(const RunConfig& cfg) {
    PipelineOptions o;
    o.S = cfg.S;
    o.split_kind = cfg.split_kind;
    o.seed = cfg.seed;
    o.M1 = cfg.M1;
    o.M2 = cfg.M2;
    return o;
}

SelectionReport run_selection(const Dataset& data, const learners::CandidateLibrary& lib,
                              const functionals::FunctionalDef& def, const PipelineOptions& options) {
    functionals::check_dataset(def, data);
    SelectionReport r;
    r.functional = def.name();
    r.splits = make_splits(data.n(), options.S, options.split_kind, derive_seed(options.seed, {seed_tag::split}));
    GridOptions go;
    go.M1 = options.M1;
    go.M2 = options.M2;
    go.frozen = options.frozen;
    GridFit fitted = fit_grid(data, lib, r.splits, def, options.seed, go);
    r.grid = std::move(fitted.grid);
    r.nuisances = std::move(fitted.nuisances);
    r.surface = compute_surface(r.grid);
    r.minimax.criterion = Criterion::minimax;
    r.minimax.selection = select(r.surface, Criterion::minimax);
    r.minimax.estimate = final_estimate(r.grid, r.minimax.selection.k, r.minimax.selection.l);
    r.mixed.criterion = Criterion::mixed_minimax;
    r.mixed.selection = select(r.surface, Criterion::mixed_minimax);
    r.mixed.estimate = final_estimate(r.grid, r.mixed.selection.k, r.mixed.selection.l);
    return r;
}

}  // namespace drselect::selector
