#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fundtext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, violated preconditions, unknown ids.
/// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Calendar year-month, the time grain of every join in the pipeline.
struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12

    /// Parses "YYYY-MM"; throws ValidationError otherwise.
    static YearMonth parse(std::string_view text);

    [[nodiscard]] std::string str() const;
    [[nodiscard]] YearMonth next() const;
    [[nodiscard]] int index() const { return year * 12 + (month - 1); }

    auto operator<=>(const YearMonth&) const = default;
};

/// Non-fatal findings collected while processing input.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
};

/// Sentinel topic label for chunks a model declines to assign.
inline constexpr int kOutlier = -1;

/// Lowercases ASCII letters; other bytes pass through unchanged.
std::string to_lower_ascii(std::string_view text);

/// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

/// Deterministic uniform double in [0, 1) from a 64-bit generator output.
inline double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace fundtext
