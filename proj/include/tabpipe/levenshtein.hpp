#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

namespace tabpipe {

/// Minimum number of single-character insertions, deletions and substitutions
/// transforming a into b. Two-row dynamic program.
inline int64_t levenshtein(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    const size_t m = a.size(), n = b.size();
    if (m == 0) return static_cast<int64_t>(n);

    std::vector<int64_t> row(m + 1);
    std::iota(row.begin(), row.end(), int64_t{0});
    for (size_t j = 1; j <= n; ++j) {
        int64_t corner = row[0];
        row[0] = static_cast<int64_t>(j);
        for (size_t i = 1; i <= m; ++i) {
            const int64_t upper = row[i];
            row[i] = std::min({row[i - 1] + 1, upper + 1,
                               corner + (a[i - 1] == b[j - 1] ? 0 : 1)});
            corner = upper;
        }
    }
    return row[m];
}

} // namespace tabpipe
