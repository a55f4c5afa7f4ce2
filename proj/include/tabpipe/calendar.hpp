#pragma once

#include <cstdint>

namespace tabpipe::calendar {

inline bool isLeapYear(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

inline int daysInMonth(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && isLeapYear(y)) return 29;
    return lengths[m - 1];
}

// Days since 1970-01-01 for a proleptic Gregorian date (Hinnant's algorithm).
inline int64_t daysFromCivil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

struct Civil {
    int year;
    int month;
    int day;
};

inline Civil civilFromDays(int64_t z) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

// 0 = Sunday .. 6 = Saturday. 1970-01-01 was a Thursday.
inline int weekdaySundayBased(int64_t days) {
    int64_t w = (days + 4) % 7;
    if (w < 0) w += 7;
    return static_cast<int>(w);
}

inline int dayOfYear(int y, int m, int d) {
    static const int cum[] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
    return cum[m - 1] + d + ((m > 2 && isLeapYear(y)) ? 1 : 0);
}

// ISO-8601 week number: week 1 contains the first Thursday of the year.
inline int isoWeekOfYear(int y, int m, int d) {
    const int64_t days = daysFromCivil(y, m, d);
    // ISO weekday, 1 = Monday .. 7 = Sunday.
    int dowSun = weekdaySundayBased(days);
    int isoDow = dowSun == 0 ? 7 : dowSun;
    // Thursday of this date's week decides the ISO year.
    const int64_t thursday = days + (4 - isoDow);
    const Civil th = civilFromDays(thursday);
    const int64_t jan1 = daysFromCivil(th.year, 1, 1);
    return static_cast<int>((thursday - jan1) / 7) + 1;
}

} // namespace tabpipe::calendar
