#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drselect/core/dataset.hpp"
#include "drselect/core/splits.hpp"

namespace drselect {

enum class FunctionalKind { expected_product, expected_cond_cov, mar_mean, mnar_mean, counterfactual_mean, ate };
enum class Criterion { minimax, mixed_minimax, both };

FunctionalKind parse_functional_kind(std::string_view s);
std::string_view to_string(FunctionalKind k);
Criterion parse_criterion(std::string_view s);
std::string_view to_string(Criterion c);

// Flat key=value text, one pair per line, '#' starts a comment. Later
// assignments of the same key replace earlier ones.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::string& path);

    void set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }
    std::optional<std::string> get(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

    // Canonical "key=value\n" text in key order; input to the manifest hash.
    std::string canonical() const;

private:
    std::map<std::string, std::string> entries_;
};

struct RunConfig {
    FunctionalKind functional = FunctionalKind::ate;
    int arm = 1;  // counterfactual_mean only
    std::optional<double> mnar_alpha;
    std::size_t S = 3;
    SplitKind split_kind = SplitKind::vfold;
    std::uint64_t seed = 0;
    double M1 = 0.01;
    std::optional<double> M2;
    std::optional<double> tau;
    std::optional<double> epsilon;
    std::size_t bootstrap_reps = 0;
    double level = 0.95;
    Criterion criterion = Criterion::both;
    std::size_t eval_size = 100000;
    CsvSchema schema;

    void validate() const;
};

// Keys outside RunConfig's fields and the learner-library namespace
// ("learner.", "grid.", "label.") are rejected.
RunConfig run_config_from(const KeyValueConfig& kv);

bool is_library_key(std::string_view key);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace drselect
