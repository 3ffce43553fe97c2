#pragma once

#include <vector>

namespace prandtl {

/// Thomas algorithm; a/b/c and r are clobbered. a[0] and c[n-1] unused.
inline void thomas_solve(std::vector<double>& a, std::vector<double>& b, std::vector<double>& c,
                         std::vector<double>& r, std::vector<double>& out) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double mlt = a[i] / b[i - 1];
        b[i] -= mlt * c[i - 1];
        r[i] -= mlt * r[i - 1];
    }
    out[n - 1] = r[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) out[i] = (r[i] - c[i] * out[i + 1]) / b[i];
}

} // namespace prandtl
