#include "drselect/functionals/functional.hpp"

#include <algorithm>
#include <cmath>

#include "drselect/core/error.hpp"
#include "drselect/simd/kernels.hpp"

namespace drselect::functionals {

double map_propensity(PSemantics s, double pi) {
    switch (s) {
        case PSemantics::raw: return pi;
        case PSemantics::reciprocal: return 1.0 / pi;
        case PSemantics::reciprocal_complement: return 1.0 / (1.0 - pi);
        case PSemantics::inverse_odds: return (1.0 - pi) / pi;
    }
    return pi;
}

namespace {

// A*Y without turning an unobserved (NaN) y into NaN when A = 0.
double a_times_y(int a, double y) { return a == 1 ? y : 0.0; }
double not_a_times_y(int a, double y) { return a == 0 ? y : 0.0; }

HCoefficients h_expected_product(const Observation& o, double) {
    return {-1.0, static_cast<double>(o.a), o.y, 0.0};
}

HCoefficients h_expected_cond_cov(const Observation& o, double) {
    return {1.0, -static_cast<double>(o.a), -o.y, o.a * o.y};
}

HCoefficients h_treated_mean(const Observation& o, double) {
    return {-static_cast<double>(o.a), 1.0, a_times_y(o.a, o.y), 0.0};
}

HCoefficients h_control_mean(const Observation& o, double) {
    return {-static_cast<double>(1 - o.a), 1.0, not_a_times_y(o.a, o.y), 0.0};
}

// Control-arm term of the ate contrast: minus h_control_mean.
HCoefficients h_control_contrast(const Observation& o, double) {
    return {static_cast<double>(1 - o.a), -1.0, -not_a_times_y(o.a, o.y), 0.0};
}

HCoefficients h_mnar(const Observation& o, double alpha) {
    if (o.a == 0) return {0.0, 1.0, 0.0, 0.0};
    const double w = std::exp(-alpha * o.y);
    return {-w, 0.0, o.y * w, o.y};
}

}  // namespace

std::string FunctionalDef::name() const {
    std::string s(to_string(kind));
    if (kind == FunctionalKind::counterfactual_mean) s += "(" + std::to_string(arm) + ")";
    return s;
}

std::vector<FitTarget> FunctionalDef::outcome_targets() const {
    std::vector<FitTarget> out;
    for (const auto& slot : slots) out.insert(out.end(), slot.fits.begin(), slot.fits.end());
    return out;
}

bool FunctionalDef::reads_y(int a) const {
    switch (kind) {
        case FunctionalKind::expected_product:
        case FunctionalKind::expected_cond_cov:
        case FunctionalKind::ate: return true;
        case FunctionalKind::mar_mean:
        case FunctionalKind::mnar_mean: return a == 1;
        case FunctionalKind::counterfactual_mean: return a == arm;
    }
    return true;
}

FunctionalDef make_functional(FunctionalKind kind, std::optional<double> alpha, int arm) {
    FunctionalDef def;
    def.kind = kind;
    def.arm = arm;
    using Combine = OutcomeSlot::Combine;
    switch (kind) {
        case FunctionalKind::expected_product:
            def.slots = {{{FitTarget::outcome()}, Combine::single}};
            def.terms = {{PSemantics::raw, 0, h_expected_product, "expected_product"}};
            break;
        case FunctionalKind::expected_cond_cov:
            def.slots = {{{FitTarget::outcome()}, Combine::single}};
            def.terms = {{PSemantics::raw, 0, h_expected_cond_cov, "expected_cond_cov"}};
            break;
        case FunctionalKind::mar_mean:
            def.slots = {{{FitTarget::outcome(1)}, Combine::single}};
            def.terms = {{PSemantics::reciprocal, 0, h_treated_mean, "mar_mean"}};
            break;
        case FunctionalKind::mnar_mean: {
            if (!alpha || !std::isfinite(*alpha)) throw ContractError("mnar_mean requires a finite alpha");
            def.alpha = *alpha;
            FitTarget num{learners::Role::outcome, 1, learners::ResponseTransform::y_exp_neg_alpha, *alpha};
            FitTarget den{learners::Role::outcome, 1, learners::ResponseTransform::exp_neg_alpha, *alpha};
            def.slots = {{{num, den}, Combine::ratio}};
            def.terms = {{PSemantics::inverse_odds, 0, h_mnar, "mnar_mean"}};
            break;
        }
        case FunctionalKind::counterfactual_mean:
            if (arm != 0 && arm != 1) throw ContractError("counterfactual_mean arm must be 0 or 1");
            def.slots = {{{FitTarget::outcome(arm)}, Combine::single}};
            if (arm == 1) {
                def.terms = {{PSemantics::reciprocal, 0, h_treated_mean, "treated_mean"}};
            } else {
                def.terms = {{PSemantics::reciprocal_complement, 0, h_control_mean, "control_mean"}};
            }
            break;
        case FunctionalKind::ate:
            def.slots = {{{FitTarget::outcome(1)}, Combine::single}, {{FitTarget::outcome(0)}, Combine::single}};
            def.terms = {{PSemantics::reciprocal, 0, h_treated_mean, "treated_mean"},
                         {PSemantics::reciprocal_complement, 1, h_control_contrast, "control_mean"}};
            break;
    }
    return def;
}

FunctionalDef make_functional(const RunConfig& cfg) { return make_functional(cfg.functional, cfg.mnar_alpha, cfg.arm); }

namespace {

std::size_t slot_offset(const FunctionalDef& def, std::size_t slot) {
    std::size_t off = 0;
    for (std::size_t s = 0; s < slot; ++s) off += def.slots[s].fits.size();
    return off;
}

double combine(const OutcomeSlot& slot, const double* parts) {
    if (slot.combine == OutcomeSlot::Combine::single) return parts[0];
    return parts[0] / std::max(parts[1], 1e-6);
}

}  // namespace

double outcome_slot_value(const FunctionalDef& def, std::size_t slot, const OutcomeFit& b, std::span<const double> x) {
    const std::size_t off = slot_offset(def, slot);
    const auto& s = def.slots[slot];
    double parts[2] = {0.0, 0.0};
    for (std::size_t k = 0; k < s.fits.size(); ++k) parts[k] = b.parts.at(off + k).predict(x);
    return combine(s, parts);
}

double h_transform(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b, const Observation& o) {
    const double pi = p.predict(o.x);
    double total = 0.0;
    for (const auto& term : def.terms) {
        const double pv = map_propensity(term.p, pi);
        const double bv = outcome_slot_value(def, term.slot, b, o.x);
        const HCoefficients h = term.h(o, def.alpha);
        const double v = bv * pv * h.h1 + bv * h.h2 + pv * h.h3 + h.h4;
        if (!std::isfinite(v)) {
            throw EstimationError(std::string("h_transform: non-finite value in term '") + term.name + "'", "evaluation");
        }
        total += v;
    }
    return total;
}

HCache HCache::build(const FunctionalDef& def, const Dataset& data, std::span<const std::size_t> rows) {
    HCache c;
    c.n = rows.size();
    const std::size_t T = def.terms.size();
    c.h1.assign(T, std::vector<double>(c.n));
    c.h2.assign(T, std::vector<double>(c.n));
    c.h3.assign(T, std::vector<double>(c.n));
    c.h4.assign(T, std::vector<double>(c.n));
    for (std::size_t k = 0; k < c.n; ++k) {
        const std::size_t i = rows[k];
        const Observation o{data.row(i), data.a(i), data.y(i)};
        for (std::size_t t = 0; t < T; ++t) {
            const HCoefficients h = def.terms[t].h(o, def.alpha);
            c.h1[t][k] = h.h1;
            c.h2[t][k] = h.h2;
            c.h3[t][k] = h.h3;
            c.h4[t][k] = h.h4;
        }
    }
    return c;
}

std::vector<std::vector<double>> propensity_arrays(const FunctionalDef& def, const FittedNuisance& p,
                                                   const Dataset& data, std::span<const std::size_t> rows) {
    std::vector<double> pi(rows.size());
    p.predict_rows(data, rows, pi);
    std::vector<std::vector<double>> out(def.terms.size(), std::vector<double>(rows.size()));
    for (std::size_t t = 0; t < def.terms.size(); ++t) {
        for (std::size_t k = 0; k < rows.size(); ++k) out[t][k] = map_propensity(def.terms[t].p, pi[k]);
    }
    return out;
}

std::vector<std::vector<double>> outcome_arrays(const FunctionalDef& def, const OutcomeFit& b, const Dataset& data,
                                                std::span<const std::size_t> rows) {
    std::vector<std::vector<double>> out(def.slots.size(), std::vector<double>(rows.size()));
    std::size_t off = 0;
    for (std::size_t s = 0; s < def.slots.size(); ++s) {
        const auto& slot = def.slots[s];
        std::vector<std::vector<double>> parts(slot.fits.size(), std::vector<double>(rows.size()));
        for (std::size_t k = 0; k < slot.fits.size(); ++k) b.parts.at(off + k).predict_rows(data, rows, parts[k]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            double vals[2] = {parts[0][r], slot.fits.size() > 1 ? parts[1][r] : 0.0};
            out[s][r] = combine(slot, vals);
        }
        off += slot.fits.size();
    }
    return out;
}

double psi_from_arrays(const FunctionalDef& def, const HCache& cache, const std::vector<std::vector<double>>& p_arrays,
                       const std::vector<std::vector<double>>& b_arrays) {
    if (cache.n == 0) throw ContractError("estimate_psi: empty validation set");
    const auto& k = simd::active();
    double total = 0.0;
    for (std::size_t t = 0; t < def.terms.size(); ++t) {
        const auto& b = b_arrays[def.terms[t].slot];
        const double s = k.bilinear_sum(b.data(), p_arrays[t].data(), cache.h1[t].data(), cache.h2[t].data(),
                                        cache.h3[t].data(), cache.h4[t].data(), cache.n);
        if (!std::isfinite(s)) {
            throw EstimationError(std::string("estimate_psi: non-finite sum in term '") + def.terms[t].name + "'",
                                  "evaluation");
        }
        total += s;
    }
    return total / static_cast<double>(cache.n);
}

double estimate_psi(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b, const Dataset& data,
                    std::span<const std::size_t> validation) {
    if (validation.empty()) throw ContractError("estimate_psi: empty validation set");
    const HCache cache = HCache::build(def, data, validation);
    return psi_from_arrays(def, cache, propensity_arrays(def, p, data, validation),
                           outcome_arrays(def, b, data, validation));
}

std::vector<double> h_values(const FunctionalDef& def, const FittedNuisance& p, const OutcomeFit& b,
                             const Dataset& data, std::span<const std::size_t> rows) {
    std::vector<double> out(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = rows[k];
        out[k] = h_transform(def, p, b, Observation{data.row(i), data.a(i), data.y(i)});
    }
    return out;
}

void check_dataset(const FunctionalDef& def, const Dataset& data) {
    for (std::size_t i = 0; i < data.n(); ++i) {
        if (def.reads_y(data.a(i)) && !std::isfinite(data.y(i))) {
            throw ValidationError("functional " + def.name() + " reads y at row " + std::to_string(i + 1) +
                                  " but it is missing or non-finite");
        }
    }
}

}  // namespace drselect::functionals
