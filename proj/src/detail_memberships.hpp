#ifndef SEPSELECT_DETAIL_MEMBERSHIPS_HPP
#define SEPSELECT_DETAIL_MEMBERSHIPS_HPP

#include <cstddef>

namespace sepselect::detail {

/**
 * Inverse-squared-distance membership shares from squared distances.
 * `self` < 0: instance-to-centroid case, shares over all p entries.
 * `self` >= 0: centroid-to-centroid case, mu[self] = 1 and shares over the
 * remaining entries. Squared distances below eps2 mark coincidence; the mass
 * is then split equally over the coincident entries.
 */
inline void memberships_from_sq_dists(const double* d2, std::size_t p, double eps2,
                                      int self, double* mu) {
    auto self_idx = self < 0 ? p : static_cast<std::size_t>(self);
    std::size_t coincident = 0;
    for (std::size_t q = 0; q < p; ++q) {
        mu[q] = 0.0;
        if (q != self_idx && d2[q] < eps2) ++coincident;
    }
    if (self_idx < p) mu[self_idx] = 1.0;

    if (coincident > 0) {
        double share = 1.0 / static_cast<double>(coincident);
        for (std::size_t q = 0; q < p; ++q)
            if (q != self_idx && d2[q] < eps2) mu[q] = share;
        return;
    }
    double total = 0.0;
    for (std::size_t q = 0; q < p; ++q)
        if (q != self_idx) total += 1.0 / d2[q];
    for (std::size_t q = 0; q < p; ++q)
        if (q != self_idx) mu[q] = (1.0 / d2[q]) / total;
}

}  // namespace sepselect::detail

#endif
