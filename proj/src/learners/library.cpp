#include "drselect/learners/library.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "drselect/core/error.hpp"

namespace drselect::learners {

void CandidateLibrary::validate() const {
    if (propensity.empty() || outcome.empty()) {
        throw ConfigError("learner library needs at least one propensity and one outcome learner");
    }
    for (const auto& s : propensity) s.validate();
    for (const auto& s : outcome) s.validate();
}

CandidateLibrary default_library() {
    CandidateLibrary lib;
    lib.propensity = {default_spec(Family::l1_logistic, Role::propensity),
                      default_spec(Family::random_forest_cls, Role::propensity),
                      default_spec(Family::gbt_cls, Role::propensity)};
    lib.outcome = {default_spec(Family::l1_linear, Role::outcome), default_spec(Family::random_forest_reg, Role::outcome),
                   default_spec(Family::gbt_reg, Role::outcome)};
    return lib;
}

namespace {

std::size_t parse_index(const std::string& key, std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v == 0) {
        throw ConfigError("config key '" + key + "': learner index must be a positive integer");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t comma = value.find(',', pos);
        if (comma == std::string::npos) comma = value.size();
        std::string item = value.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        double v = 0.0;
        auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v)) {
            throw ConfigError("config key '" + key + "': bad grid value '" + item + "'");
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

struct Pending {
    std::string family;
    std::string label;
    std::vector<std::pair<std::string, std::vector<double>>> grid;
    std::optional<std::size_t> folds;
};

}  // namespace

CandidateLibrary library_from(const KeyValueConfig& kv) {
    std::map<std::size_t, Pending> p_side;
    std::map<std::size_t, Pending> b_side;
    bool any = false;
    for (const auto& [key, value] : kv.entries()) {
        if (!is_library_key(key)) continue;
        const auto first = key.find('.');
        const auto second = key.find('.', first + 1);
        if (second == std::string::npos) throw ConfigError("malformed learner key '" + key + "'");
        const std::string kind = key.substr(0, first);
        const std::string side = key.substr(first + 1, second - first - 1);
        if (side != "p" && side != "b") throw ConfigError("learner key '" + key + "': side must be p or b");
        auto& table = side == "p" ? p_side : b_side;
        if (kind == "learner" || kind == "label") {
            const std::size_t idx = parse_index(key, std::string_view(key).substr(second + 1));
            if (kind == "learner") {
                table[idx].family = value;
                any = true;
            } else {
                table[idx].label = value;
            }
        } else {
            const auto third = key.find('.', second + 1);
            if (third == std::string::npos) throw ConfigError("grid key '" + key + "' needs grid.<p|b>.<i>.<param>");
            const std::size_t idx = parse_index(key, std::string_view(key).substr(second + 1, third - second - 1));
            const std::string param = key.substr(third + 1);
            if (param == "folds") {
                const auto v = parse_list(key, value);
                if (v.size() != 1 || v[0] < 2) throw ConfigError("config key '" + key + "': folds must be >= 2");
                table[idx].folds = static_cast<std::size_t>(v[0]);
            } else {
                table[idx].grid.emplace_back(param, parse_list(key, value));
            }
        }
    }
    if (!any) {
        if (!p_side.empty() || !b_side.empty()) throw ConfigError("grid/label keys given without learner keys");
        return default_library();
    }

    auto build = [](const std::map<std::size_t, Pending>& table, Role role, const char* side) {
        std::vector<LearnerSpec> specs;
        std::size_t expect = 1;
        for (const auto& [idx, pend] : table) {
            if (idx != expect) {
                throw ConfigError(std::string("learner.") + side + " indices must be contiguous from 1 (missing " +
                                  std::to_string(expect) + ")");
            }
            if (pend.family.empty()) {
                throw ConfigError(std::string("learner.") + side + "." + std::to_string(idx) + " has no family");
            }
            std::string label = pend.label.empty() ? pend.family + "#" + std::to_string(idx) : pend.label;
            LearnerSpec spec = default_spec(parse_family(pend.family), role, label);
            for (const auto& [param, values] : pend.grid) spec.set_dimension(param, values);
            if (pend.folds) spec.cv_folds = *pend.folds;
            specs.push_back(std::move(spec));
            ++expect;
        }
        return specs;
    };
    CandidateLibrary lib;
    lib.propensity = build(p_side, Role::propensity, "p");
    lib.outcome = build(b_side, Role::outcome, "b");
    lib.validate();
    return lib;
}

}  // namespace drselect::learners
