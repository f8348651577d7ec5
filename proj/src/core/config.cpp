#include "drselect/core/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "drselect/core/error.hpp"

namespace drselect {

FunctionalKind parse_functional_kind(std::string_view s) {
    if (s == "expected_product") return FunctionalKind::expected_product;
    if (s == "expected_cond_cov") return FunctionalKind::expected_cond_cov;
    if (s == "mar_mean") return FunctionalKind::mar_mean;
    if (s == "mnar_mean") return FunctionalKind::mnar_mean;
    if (s == "counterfactual_mean") return FunctionalKind::counterfactual_mean;
    if (s == "ate") return FunctionalKind::ate;
    throw ConfigError("unknown functional '" + std::string(s) + "'");
}

std::string_view to_string(FunctionalKind k) {
    switch (k) {
        case FunctionalKind::expected_product: return "expected_product";
        case FunctionalKind::expected_cond_cov: return "expected_cond_cov";
        case FunctionalKind::mar_mean: return "mar_mean";
        case FunctionalKind::mnar_mean: return "mnar_mean";
        case FunctionalKind::counterfactual_mean: return "counterfactual_mean";
        case FunctionalKind::ate: return "ate";
    }
    return "?";
}

Criterion parse_criterion(std::string_view s) {
    if (s == "minimax") return Criterion::minimax;
    if (s == "mixed_minimax" || s == "mixed") return Criterion::mixed_minimax;
    if (s == "both") return Criterion::both;
    throw ConfigError("unknown criterion '" + std::string(s) + "' (expected minimax | mixed_minimax | both)");
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::minimax: return "minimax";
        case Criterion::mixed_minimax: return "mixed_minimax";
        case Criterion::both: return "both";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

double to_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
        throw ConfigError("config key '" + key + "': expected a real number, got '" + v + "'");
    }
    return out;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig kv;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        kv.set(std::move(key), std::move(value));
    }
    return kv;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
}

bool is_library_key(std::string_view key) {
    return key.starts_with("learner.") || key.starts_with("grid.") || key.starts_with("label.");
}

void RunConfig::validate() const {
    if (!(M1 > 0.0 && M1 < 0.5)) throw ConfigError("M1 must lie in (0, 0.5)");
    if (M2 && !(*M2 > 0.0)) throw ConfigError("M2 must be positive");
    if (S < 1) throw ConfigError("S must be >= 1");
    if (tau && epsilon) throw ConfigError("tau and epsilon are mutually exclusive");
    if (tau && !(*tau > 0.0)) throw ConfigError("tau must be positive");
    if (epsilon && !(*epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    if (functional == FunctionalKind::mnar_mean && !mnar_alpha) {
        throw ConfigError("functional mnar_mean requires mnar.alpha");
    }
    if (arm != 0 && arm != 1) throw ConfigError("arm must be 0 or 1");
    if (bootstrap_reps == 1) throw ConfigError("bootstrap_reps must be 0 (off) or >= 2");
}

RunConfig run_config_from(const KeyValueConfig& kv) {
    static const std::set<std::string> known = {
        "functional", "arm", "mnar.alpha", "S", "split_kind", "seed", "M1", "M2", "tau", "epsilon",
        "bootstrap_reps", "level", "criterion", "eval_size", "data.y", "data.a", "data.x_prefix"};
    RunConfig cfg;
    for (const auto& [key, value] : kv.entries()) {
        if (is_library_key(key)) continue;
        if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
        if (key == "functional") cfg.functional = parse_functional_kind(value);
        else if (key == "arm") cfg.arm = static_cast<int>(to_count(key, value));
        else if (key == "mnar.alpha") cfg.mnar_alpha = to_real(key, value);
        else if (key == "S") cfg.S = to_count(key, value);
        else if (key == "split_kind") cfg.split_kind = parse_split_kind(value);
        else if (key == "seed") cfg.seed = to_count(key, value);
        else if (key == "M1") cfg.M1 = to_real(key, value);
        else if (key == "M2") cfg.M2 = to_real(key, value);
        else if (key == "tau") cfg.tau = to_real(key, value);
        else if (key == "epsilon") cfg.epsilon = to_real(key, value);
        else if (key == "bootstrap_reps") cfg.bootstrap_reps = to_count(key, value);
        else if (key == "level") cfg.level = to_real(key, value);
        else if (key == "criterion") cfg.criterion = parse_criterion(value);
        else if (key == "eval_size") cfg.eval_size = to_count(key, value);
        else if (key == "data.y") cfg.schema.y_column = value;
        else if (key == "data.a") cfg.schema.a_column = value;
        else if (key == "data.x_prefix") cfg.schema.x_prefix = value;
    }
    cfg.validate();
    return cfg;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace drselect
