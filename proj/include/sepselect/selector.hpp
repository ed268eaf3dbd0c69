#ifndef SEPSELECT_SELECTOR_HPP
#define SEPSELECT_SELECTOR_HPP

#include <cstddef>
#include <vector>

#include "sepselect/dataset.hpp"
#include "sepselect/separability.hpp"

namespace sepselect {

struct SelectionStep {
    int feature_index = -1;
    double gain = 0.0;
    SeparabilityScore score_after;
};

struct SelectionTrace {
    std::vector<SelectionStep> steps;
    SeparabilityParams params;
    int k = 0;
    std::size_t candidate_evaluations = 0;

    FeatureSubset selected() const;           // all steps, in selection order
    FeatureSubset selected(std::size_t t) const;  // first t steps
};

/// Separability improvement from adding one candidate feature to a subset.
double gain(const Dataset& d, const ClassPartition& part, const FeatureSubset& subset,
            int candidate, const SeparabilityParams& params);

/**
 * Forward greedy selection: at each step every unselected feature is scored
 * and the one with the largest gain is accepted (gains within 1e-12 tie in
 * favor of the smaller index). Runs for exactly k steps regardless of gain
 * sign. Candidate evaluation is data-parallel over `workers` threads; the
 * trace is identical for any worker count.
 */
SelectionTrace select(const Dataset& d, const ClassPartition& part, int k,
                      const SeparabilityParams& params, int workers = 1);

}  // namespace sepselect

#endif
