#include "drselect/core/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "drselect/core/error.hpp"

namespace drselect {

Dataset::Dataset(std::vector<double> x, std::vector<std::uint8_t> a, std::vector<double> y, std::size_t d,
                 std::vector<std::string> covariate_names)
    : x_(std::move(x)), a_(std::move(a)), y_(std::move(y)), d_(d), names_(std::move(covariate_names)) {
    if (y_.size() != a_.size() || x_.size() != a_.size() * d_) {
        throw ContractError("dataset: inconsistent column lengths");
    }
    if (a_.size() < 2) throw ValidationError("dataset: need at least 2 rows, got " + std::to_string(a_.size()));
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] > 1) throw ValidationError("dataset: a must be 0 or 1 (row " + std::to_string(i + 1) + ")");
    }
    for (std::size_t k = 0; k < x_.size(); ++k) {
        if (!std::isfinite(x_[k])) {
            throw ValidationError("dataset: non-finite covariate at row " + std::to_string(k / d_ + 1));
        }
    }
    if (names_.empty()) {
        for (std::size_t j = 0; j < d_; ++j) names_.push_back("x" + std::to_string(j + 1));
    }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<double> x;
    std::vector<std::uint8_t> a;
    std::vector<double> y;
    x.reserve(rows.size() * d_);
    a.reserve(rows.size());
    y.reserve(rows.size());
    for (std::size_t i : rows) {
        const auto r = row(i);
        x.insert(x.end(), r.begin(), r.end());
        a.push_back(a_[i]);
        y.push_back(y_[i]);
    }
    return Dataset(std::move(x), std::move(a), std::move(y), d_, names_);
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t start = 0;
        while (start < cell.size() && cell[start] == ' ') ++start;
        out.push_back(cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col, bool allow_missing) {
    if (allow_missing && (cell.empty() || cell == "NA" || cell == "nan" || cell == "NaN")) {
        return std::nan("");
    }
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (!cell.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || cell.empty()) {
        throw ParseError("csv: non-numeric cell '" + cell + "' at row " + std::to_string(row) + ", column " +
                             std::to_string(col),
                         row, col);
    }
    return v;
}

}  // namespace

Dataset parse_dataset(const std::string& csv_text, const CsvSchema& schema) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("csv: missing header row");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line = line.substr(3);
    const auto header = split_line(line);

    auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == name) return c;
        }
        throw SchemaError("csv: missing column '" + name + "'");
    };
    const std::size_t y_col = find(schema.y_column);
    const std::size_t a_col = find(schema.a_column);
    std::vector<std::size_t> x_cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == y_col || c == a_col) continue;
        if (header[c].rfind(schema.x_prefix, 0) == 0) {
            x_cols.push_back(c);
            names.push_back(header[c]);
        }
    }
    if (x_cols.empty()) throw SchemaError("csv: no covariate columns with prefix '" + schema.x_prefix + "'");

    std::vector<double> x;
    std::vector<std::uint8_t> a;
    std::vector<double> y;
    // Data rows are numbered from 1, matching how a reader counts records
    // below the header.
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto cells = split_line(line);
        if (cells.size() != header.size()) {
            throw ParseError("csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()),
                             row, cells.size());
        }
        const double av = parse_number(cells[a_col], row, a_col + 1, false);
        if (av != 0.0 && av != 1.0) {
            throw ValidationError("csv: column '" + schema.a_column + "' must be 0 or 1, got '" + cells[a_col] +
                                  "' at row " + std::to_string(row));
        }
        a.push_back(static_cast<std::uint8_t>(av));
        y.push_back(parse_number(cells[y_col], row, y_col + 1, true));
        for (std::size_t c : x_cols) x.push_back(parse_number(cells[c], row, c + 1, false));
    }
    return Dataset(std::move(x), std::move(a), std::move(y), x_cols.size(), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open data file '" + path.string() + "'", "io");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), schema);
}

}  // namespace drselect
