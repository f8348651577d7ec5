#include "drselect/learners/design.hpp"

namespace drselect::learners {

ColMatrix gather_design(const Dataset& data, std::span<const std::size_t> rows, int poly_degree) {
    const std::size_t deg = static_cast<std::size_t>(poly_degree < 1 ? 1 : poly_degree);
    ColMatrix m;
    m.n = rows.size();
    m.p = data.d() * deg;
    m.values.resize(m.n * m.p);
    for (std::size_t j = 0; j < data.d(); ++j) {
        for (std::size_t i = 0; i < m.n; ++i) {
            const double v = data.x(rows[i], j);
            double pw = v;
            for (std::size_t k = 0; k < deg; ++k) {
                m.values[(j * deg + k) * m.n + i] = pw;
                pw *= v;
            }
        }
    }
    return m;
}

void expand_row(std::span<const double> x, int poly_degree, std::vector<double>& out) {
    const std::size_t deg = static_cast<std::size_t>(poly_degree < 1 ? 1 : poly_degree);
    out.resize(x.size() * deg);
    for (std::size_t j = 0; j < x.size(); ++j) {
        double pw = x[j];
        for (std::size_t k = 0; k < deg; ++k) {
            out[j * deg + k] = pw;
            pw *= x[j];
        }
    }
}

}  // namespace drselect::learners
