#pragma once

#include "arsel/model.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace arsel::cli {

enum ExitCode : int { kSuccess = 0, kInputError = 2, kNumericalFailure = 3 };

/// Runs one command line (without the program name). Results go to `out`
/// unless --out is given; errors are written to `err` as one JSON record.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Single numeric column, optional one-line header, '#' comments and blank lines skipped.
[[nodiscard]] TimeSeries read_series(std::istream& in);
[[nodiscard]] TimeSeries read_series_file(const std::string& path);

/// Parsed `key = value` model file.
struct ModelFile {
    std::vector<double> levels;
    double sigma2 = 1.0;
    std::string kind = "auto";  // auto | unit-root | stationary
};

[[nodiscard]] ModelFile read_model(std::istream& in);
[[nodiscard]] std::vector<double> parse_number_list(std::string_view text);

}  // namespace arsel::cli
