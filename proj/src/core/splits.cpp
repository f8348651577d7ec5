#include "drselect/core/splits.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "drselect/core/error.hpp"
#include "drselect/core/seed.hpp"

namespace drselect {

SplitKind parse_split_kind(std::string_view s) {
    if (s == "vfold") return SplitKind::vfold;
    if (s == "repeated_half") return SplitKind::repeated_half;
    throw ConfigError("unknown split_kind '" + std::string(s) + "' (expected vfold | repeated_half)");
}

std::string_view to_string(SplitKind k) { return k == SplitKind::vfold ? "vfold" : "repeated_half"; }

std::vector<std::size_t> SplitScheme::training_rows(std::size_t s) const {
    std::vector<std::size_t> rows;
    const auto& t = assignments.at(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 0) rows.push_back(i);
    }
    if (rows.empty()) {
        rows.resize(t.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    return rows;
}

std::vector<std::size_t> SplitScheme::validation_rows(std::size_t s) const {
    std::vector<std::size_t> rows;
    const auto& t = assignments.at(s);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] == 1) rows.push_back(i);
    }
    return rows;
}

namespace {

std::vector<std::size_t> permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    // Fisher-Yates with an explicit draw so the sequence does not depend on
    // the standard library's shuffle.
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace

SplitScheme make_splits(std::size_t n, std::size_t S, SplitKind kind, std::uint64_t seed) {
    if (S < 1) throw ContractError("make_splits: S must be >= 1");
    if (n < 2) throw ContractError("make_splits: n must be >= 2");
    SplitScheme scheme;
    scheme.kind = kind;
    scheme.assignments.assign(S, std::vector<std::uint8_t>(n, 0));
    if (kind == SplitKind::vfold) {
        if (n < 2 * S) {
            throw ValidationError("make_splits: vfold needs n >= 2S (n=" + std::to_string(n) +
                                      ", S=" + std::to_string(S) + ")",
                                  "sizing");
        }
        if (S == 1) {
            std::fill(scheme.assignments[0].begin(), scheme.assignments[0].end(), std::uint8_t{1});
            return scheme;
        }
        Rng rng(derive_seed(seed, {seed_tag::split}));
        const auto perm = permutation(n, rng);
        const std::size_t base = n / S;
        const std::size_t extra = n % S;
        std::size_t pos = 0;
        for (std::size_t s = 0; s < S; ++s) {
            const std::size_t size = base + (s < extra ? 1 : 0);
            for (std::size_t k = 0; k < size; ++k) scheme.assignments[s][perm[pos++]] = 1;
        }
        return scheme;
    }
    for (std::size_t s = 0; s < S; ++s) {
        Rng rng(derive_seed(seed, {seed_tag::split, s}));
        const auto perm = permutation(n, rng);
        for (std::size_t i = 0; i < n / 2; ++i) scheme.assignments[s][perm[i]] = 1;
    }
    return scheme;
}

double truncate_propensity(double p, double M1) { return std::min(std::max(p, M1), 1.0 - M1); }

}  // namespace drselect
