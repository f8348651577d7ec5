#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace drselect {

enum class SplitKind { vfold, repeated_half };

SplitKind parse_split_kind(std::string_view s);
std::string_view to_string(SplitKind k);

// T^s for s = 0..S-1: 1 marks a validation row, 0 a training row. A split
// with no training rows (vfold with S = 1) trains on every row.
struct SplitScheme {
    SplitKind kind = SplitKind::vfold;
    std::vector<std::vector<std::uint8_t>> assignments;

    std::size_t splits() const noexcept { return assignments.size(); }
    std::size_t n() const noexcept { return assignments.empty() ? 0 : assignments.front().size(); }
    std::vector<std::size_t> training_rows(std::size_t s) const;
    std::vector<std::size_t> validation_rows(std::size_t s) const;
};

// vfold: a seeded permutation of 0..n-1 cut into S near-equal folds, fold s
// validating split s. repeated_half: S independent assignments with exactly
// floor(n/2) validation rows each. vfold with S = 1 validates every row.
SplitScheme make_splits(std::size_t n, std::size_t S, SplitKind kind, std::uint64_t seed);

// Clamp into [M1, 1 - M1].
double truncate_propensity(double p, double M1);

}  // namespace drselect
