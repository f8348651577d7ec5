#include "drselect/simulation/ddml.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "drselect/core/error.hpp"
#include "drselect/core/seed.hpp"
#include "drselect/core/splits.hpp"
#include "drselect/selector/psi_grid.hpp"

namespace drselect::sim {

double normal_critical(double level) {
    if (!(level > 0.0 && level < 1.0)) throw ContractError("normal_critical: level must lie in (0, 1)");
    return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + level / 2.0);
}

DdmlResult ddml_crossfit(const Dataset& data, const learners::LearnerSpec& p_spec,
                         const learners::LearnerSpec& b_spec, const functionals::FunctionalDef& def,
                         std::uint64_t seed, const DdmlOptions& options) {
    if (data.n() < 4) throw ContractError("ddml_crossfit requires n >= 4");
    functionals::check_dataset(def, data);
    const SplitScheme halves = make_splits(data.n(), 2, SplitKind::vfold, derive_seed(seed, {seed_tag::ddml}));
    learners::CandidateLibrary lib{{p_spec}, {b_spec}};
    selector::GridOptions go;
    go.M1 = options.M1;
    go.M2 = options.M2;
    const auto cache = selector::fit_nuisances(data, lib, halves, def, derive_seed(seed, {seed_tag::ddml, 1}), go);

    DdmlResult r;
    std::vector<double> h_all;
    h_all.reserve(data.n());
    double psi[2];
    for (std::size_t s = 0; s < 2; ++s) {
        const auto rows = halves.validation_rows(s);
        const auto h = functionals::h_values(def, cache.propensity[s][0], cache.outcome[s][0], data, rows);
        double total = 0.0;
        for (double v : h) total += v;
        psi[s] = total / static_cast<double>(h.size());
        for (double v : h) h_all.push_back(v - psi[s]);
    }
    r.psi1 = psi[0];
    r.psi2 = psi[1];
    r.estimate = 0.5 * (psi[0] + psi[1]);
    double ss = 0.0;
    for (double v : h_all) ss += v * v;
    const double n = static_cast<double>(h_all.size());
    r.se = std::sqrt(ss / n / n);
    const double z = normal_critical(options.level);
    r.lo = r.estimate - z * r.se;
    r.hi = r.estimate + z * r.se;
    return r;
}

}  // namespace drselect::sim
