#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace surveyq {

/// Calendar date with ISO-8601 (YYYY-MM-DD) parsing and formatting.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    /// Days since 1970-01-01 (negative before). Proleptic Gregorian.
    std::int64_t serial() const;

    std::string iso() const;

    /// Parses strict YYYY-MM-DD, validating month and day ranges.
    /// Throws ValidationError on malformed input.
    static Date parse(std::string_view text);
};

inline std::int64_t days_between(const Date& from, const Date& to) {
    return to.serial() - from.serial();
}

}  // namespace surveyq
