#ifndef SEPSELECT_EVALUATION_HPP
#define SEPSELECT_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sepselect/dataset.hpp"
#include "sepselect/selector.hpp"

namespace sepselect {

enum class Metric { AccuracyKnn, NmiKmeans };

Metric metric_from_string(const std::string& s);
std::string to_string(Metric m);

struct EvalConfig {
    int knn_k = 5;
    int folds = 10;
    std::uint64_t seed = 0;
    int max_top = 150;
    int kmeans_max_iter = 300;
    double kmeans_tol = 1e-6;

    void validate() const;
};

struct EvaluationCurve {
    Metric metric = Metric::AccuracyKnn;
    std::vector<double> values;  // values[t-1] = metric on the top-t features
    double max_value = 0.0;
    double ave_value = 0.0;
    // per-point variance of the per-fold accuracies; diagnostic only,
    // filled for the kNN metric and empty otherwise
    std::vector<double> fold_variance;
};

/**
 * Pooled k-nearest-neighbour accuracy under the given fold assignment,
 * on the subset columns. Neighbour ties break on the smaller instance
 * index; vote ties break on the nearest neighbour's class, then on the
 * smaller class index. Folds whose training side is smaller than knn_k
 * use the training size instead and append a note to `warnings`.
 * `per_fold` receives each fold's own accuracy when given.
 */
double knn_accuracy(const Dataset& d, const FeatureSubset& subset,
                    const FoldAssignment& folds, int knn_k,
                    std::vector<std::string>* warnings = nullptr,
                    std::vector<double>* per_fold = nullptr);

/// 0-based seed instance indices for the deterministic k-means initialisation.
std::vector<std::size_t> kmeans_seed_indices(std::size_t n, std::size_t p);

/**
 * Lloyd's algorithm from the deterministic seed instances. Assignment ties
 * go to the smaller cluster; an empty cluster is reseeded to the instance
 * farthest from its nearest centroid. Stops when no centroid moves more
 * than kmeans_tol or after kmeans_max_iter rounds. When given,
 * objective_trace receives the within-cluster sum of squared distances
 * after each assignment pass.
 */
std::vector<int> kmeans_deterministic(const Dataset& d, const FeatureSubset& subset,
                                      std::size_t p, const EvalConfig& cfg,
                                      std::vector<double>* objective_trace = nullptr);

/**
 * Normalized mutual information 2*I(L;C)/(H(L)+H(C)) with natural-log
 * entropies. When both entropies vanish the partitions are compared
 * directly: 1 if identical, else 0.
 */
double nmi(const std::vector<int>& labels, const std::vector<int>& clusters);

/**
 * Metric value for each top-t prefix of the selection trace,
 * t = 1..min(cfg.max_top, trace size), with max and mean summaries.
 * Points are independent and are evaluated across `workers` threads.
 */
EvaluationCurve performance_curve(const Dataset& d, const SelectionTrace& trace,
                                  Metric metric, const EvalConfig& cfg,
                                  int workers = 1,
                                  std::vector<std::string>* warnings = nullptr);

}  // namespace sepselect

#endif
