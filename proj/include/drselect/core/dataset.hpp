#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace drselect {

// Observed units O_i = (X_i, A_i, Y_i). Covariates are stored row-major.
// y may hold NaN where the unit's outcome is unobserved (A = 0 under the
// missing-data functionals); functionals check finiteness where they read it.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<double> x, std::vector<std::uint8_t> a, std::vector<double> y, std::size_t d,
            std::vector<std::string> covariate_names = {});

    std::size_t n() const noexcept { return a_.size(); }
    std::size_t d() const noexcept { return d_; }

    std::span<const double> row(std::size_t i) const { return {x_.data() + i * d_, d_}; }
    double x(std::size_t i, std::size_t j) const { return x_[i * d_ + j]; }
    int a(std::size_t i) const { return a_[i]; }
    double y(std::size_t i) const { return y_[i]; }

    std::span<const double> x_data() const noexcept { return x_; }
    std::span<const std::uint8_t> a_data() const noexcept { return a_; }
    std::span<const double> y_data() const noexcept { return y_; }
    const std::vector<std::string>& covariate_names() const noexcept { return names_; }

    // Rows taken in the given order; duplicates allowed (bootstrap resamples).
    Dataset subset(std::span<const std::size_t> rows) const;

private:
    std::vector<double> x_;
    std::vector<std::uint8_t> a_;
    std::vector<double> y_;
    std::size_t d_ = 0;
    std::vector<std::string> names_;
};

struct CsvSchema {
    std::string y_column = "y";
    std::string a_column = "a";
    // Every header starting with this prefix becomes a covariate, in file order.
    std::string x_prefix = "x";
};

Dataset parse_dataset(const std::string& csv_text, const CsvSchema& schema);
Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema);

std::vector<std::size_t> all_rows(std::size_t n);

}  // namespace drselect
