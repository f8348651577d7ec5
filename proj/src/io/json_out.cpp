#include "drselect/io/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "drselect/core/config.hpp"
#include "drselect/core/error.hpp"
#include "drselect/simd/kernels.hpp"

namespace drselect::io {

std::string format_number(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += Json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
                emit(it.value(), indent, depth + 1, out);
            }
            newline(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                emit(v, indent, depth + 1, out);
            }
            newline(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump(const Json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    out += '\n';
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string(), "io");
    f << text;
    if (!f) throw ValidationError("failed writing " + path.string(), "io");
}

Json matrix_json(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
    Json m = Json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < cols; ++c) row.push_back(values[r * cols + c]);
        m.push_back(std::move(row));
    }
    return m;
}

Json manifest(const std::string& command, const std::string& canonical_config, std::uint64_t seed,
              const Json& inputs) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_config)));
    Json m;
    m["tool"] = "drselect";
    m["version"] = kVersion;
    m["command"] = command;
    m["config"] = canonical_config;
    m["config_hash"] = hash;
    m["seed"] = seed;
    m["inputs"] = inputs;
    m["simd"] = std::string(simd::active_name());
#if defined(__VERSION__)
    m["compiler"] = __VERSION__;
#endif
    return m;
}

}  // namespace drselect::io
