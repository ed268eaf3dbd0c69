#ifndef SEPSELECT_DATASET_HPP
#define SEPSELECT_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sepselect {

/**
 * Immutable labeled tabular dataset: an n x m feature matrix plus one class
 * label per row. Labels are stored as dense ids 0..p-1 whose order matches
 * class_names() (lexicographic on the original label text). Construction
 * validates shape, label coverage and finiteness; instances are safe to
 * share across threads afterwards.
 */
class Dataset {
public:
    Dataset(std::vector<double> values,
            std::size_t n,
            std::size_t m,
            std::vector<int> label_ids,
            std::vector<std::string> feature_names,
            std::vector<std::string> class_names);

    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }
    std::size_t p() const { return class_names_.size(); }

    double at(std::size_t i, std::size_t j) const { return values_[i * m_ + j]; }
    const double* row(std::size_t i) const { return values_.data() + i * m_; }

    int label(std::size_t i) const { return labels_[i]; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_names() const { return class_names_; }

private:
    std::vector<double> values_;  // row-major n*m
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<int> labels_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_names_;
};

/// Per-class instance index sets, in canonical class order.
struct ClassPartition {
    std::vector<std::vector<int>> classes;  // ascending indices per class
    std::vector<std::string> class_order;
};

struct FoldAssignment {
    std::vector<int> fold_of;  // size n, values in 0..folds-1
    int folds = 0;
    std::uint64_t seed = 0;
};

/**
 * Load a CSV file into a Dataset. The label column is chosen by header name
 * or, with a leading '#', by 0-based column position. Labels are mapped to
 * class ids in lexicographic order of the label text. Throws
 * std::runtime_error on I/O problems and std::invalid_argument on malformed
 * content (bad cell errors name the 1-based data row and the column).
 */
Dataset load_csv(const std::string& path, const std::string& label_column,
                 bool has_header = true);

/// Rescale every column to [0,1] via (x-min)/(max-min); constant columns map to 0.
Dataset minmax_normalize(const Dataset& d);

ClassPartition partition_by_class(const Dataset& d);

/**
 * Deterministic stratified fold assignment. Within each class the indices
 * are shuffled by a Fisher-Yates pass driven by an mt19937_64 seeded from
 * (seed, class index), then dealt to folds by a round-robin pointer that
 * carries over between classes, so fold sizes per class differ by at most
 * one and every fold is populated whenever folds <= n.
 */
FoldAssignment stratified_folds(const Dataset& d, int folds, std::uint64_t seed);

}  // namespace sepselect

#endif
