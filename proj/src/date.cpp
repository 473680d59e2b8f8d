#include "surveyq/date.hpp"

#include <array>
#include <cstdio>

#include "surveyq/errors.hpp"

namespace surveyq {

namespace {

bool is_leap(int year) {
    if (year % 400 == 0) return true;
    if (year % 100 == 0) return false;
    return year % 4 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> kMonthDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2) return is_leap(year) ? 29 : 28;
    return kMonthDays[static_cast<std::size_t>(month - 1)];
}

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_fixed_uint(std::string_view s, std::size_t offset, std::size_t len, int& out) {
    if (offset + len > s.size()) return false;
    int value = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char ch = s[offset + i];
        if (ch < '0' || ch > '9') return false;
        value = value * 10 + (ch - '0');
    }
    out = value;
    return true;
}

}  // namespace

std::int64_t Date::serial() const {
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(std::string_view text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_fixed_uint(text, 0, 4, d.year) ||
        !parse_fixed_uint(text, 5, 2, d.month) ||
        !parse_fixed_uint(text, 8, 2, d.day)) {
        throw ValidationError("invalid date (expected YYYY-MM-DD): '" + std::string(text) + "'");
    }
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
        throw ValidationError("date out of range: '" + std::string(text) + "'");
    }
    return d;
}

}  // namespace surveyq
