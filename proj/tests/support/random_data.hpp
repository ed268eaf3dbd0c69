#ifndef SEPSELECT_TESTS_RANDOM_DATA_HPP
#define SEPSELECT_TESTS_RANDOM_DATA_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "sepselect/dataset.hpp"

namespace testdata {

// Raw form consumed by the reference oracle.
struct RawDataset {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int num_classes = 0;
};

/**
 * Random dataset with n in [p+1, n_max], m in [1, m_max], p in {2,3,4},
 * values in [0,1]. Every class gets at least one instance.
 */
RawDataset random_raw(std::mt19937_64& rng, int n_max = 30, int m_max = 8);

sepselect::Dataset to_dataset(const RawDataset& raw);

/**
 * Deterministic 84x2308 four-class dataset shaped like a small
 * gene-expression matrix: most columns are noise, a small scattered set
 * carries per-class mean shifts. Stands in for SRBCT when the real file
 * is not on disk.
 */
sepselect::Dataset surrogate_expression_dataset();

}  // namespace testdata

#endif
