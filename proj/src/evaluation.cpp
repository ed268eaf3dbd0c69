#include "sepselect/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "sepselect/parallel.hpp"

namespace sepselect {
namespace {

double sq_dist_rows(const Dataset& d, std::size_t a, std::size_t b,
                    const std::vector<int>& cols) {
    const double* ra = d.row(a);
    const double* rb = d.row(b);
    double s = 0.0;
    for (int j : cols) {
        double diff = ra[j] - rb[j];
        s += diff * diff;
    }
    return s;
}

}  // namespace

Metric metric_from_string(const std::string& s) {
    if (s == "knn") return Metric::AccuracyKnn;
    if (s == "nmi") return Metric::NmiKmeans;
    throw std::invalid_argument("unknown metric: " + s);
}

std::string to_string(Metric m) {
    return m == Metric::AccuracyKnn ? "knn" : "nmi";
}

void EvalConfig::validate() const {
    if (knn_k < 1) throw std::invalid_argument("knn_k must be at least 1");
    if (folds < 2) throw std::invalid_argument("folds must be at least 2");
    if (max_top < 1) throw std::invalid_argument("max_top must be at least 1");
    if (kmeans_max_iter < 1) throw std::invalid_argument("kmeans_max_iter must be at least 1");
    if (!(kmeans_tol > 0.0)) throw std::invalid_argument("kmeans_tol must be positive");
}

double knn_accuracy(const Dataset& d, const FeatureSubset& subset,
                    const FoldAssignment& folds, int knn_k,
                    std::vector<std::string>* warnings, std::vector<double>* per_fold) {
    if (subset.empty()) throw std::invalid_argument("empty feature subset");
    subset.validate(d.m());
    if (knn_k < 1) throw std::invalid_argument("knn_k must be at least 1");
    if (folds.fold_of.size() != d.n())
        throw std::invalid_argument("fold assignment does not match dataset size");

    const std::size_t n = d.n();
    std::size_t correct = 0;
    if (per_fold) per_fold->clear();

    std::vector<std::size_t> train;
    std::vector<std::pair<double, std::size_t>> dist;  // (squared distance, instance)
    std::vector<int> votes(d.p(), 0);

    for (int fold = 0; fold < folds.folds; ++fold) {
        train.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (folds.fold_of[i] != fold) train.push_back(i);
        if (train.empty())
            throw std::invalid_argument("fold " + std::to_string(fold) +
                                        " leaves no training instances");

        int k_eff = knn_k;
        if (train.size() < static_cast<std::size_t>(knn_k)) {
            k_eff = static_cast<int>(train.size());
            if (warnings)
                warnings->push_back("fold " + std::to_string(fold) + ": training size " +
                                    std::to_string(train.size()) + " < knn_k " +
                                    std::to_string(knn_k) + ", using k=" +
                                    std::to_string(k_eff));
        }

        std::size_t fold_correct = 0, fold_size = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (folds.fold_of[i] == fold) {
                ++fold_size;
                dist.clear();
                for (std::size_t t : train)
                    dist.emplace_back(sq_dist_rows(d, i, t, subset.indices), t);
                // neighbour-distance ties resolve to the smaller instance index
                std::partial_sort(dist.begin(), dist.begin() + k_eff, dist.end());

                std::fill(votes.begin(), votes.end(), 0);
                for (int r = 0; r < k_eff; ++r) votes[d.label(dist[r].second)] += 1;

                int top_votes = *std::max_element(votes.begin(), votes.end());
                int nearest_label = d.label(dist[0].second);
                int winner;
                if (votes[nearest_label] == top_votes) {
                    winner = nearest_label;
                } else {
                    winner = static_cast<int>(
                        std::find(votes.begin(), votes.end(), top_votes) - votes.begin());
                }
                if (winner == d.label(i)) ++fold_correct;
            }
        }
        correct += fold_correct;
        if (per_fold && fold_size > 0)
            per_fold->push_back(static_cast<double>(fold_correct) /
                                static_cast<double>(fold_size));
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

std::vector<std::size_t> kmeans_seed_indices(std::size_t n, std::size_t p) {
    if (p < 2) throw std::invalid_argument("need at least 2 clusters");
    if (p > n) throw std::invalid_argument("p=" + std::to_string(p) + " exceeds n=" +
                                           std::to_string(n));
    // 1-based: start, start+int, ..., start+(p-1)*int
    std::size_t interval = (n - 1) / (p - 1);
    std::size_t start = (n - (p - 1) * interval + 1) / 2;
    std::vector<std::size_t> seeds(p);
    for (std::size_t t = 0; t < p; ++t) seeds[t] = start - 1 + t * interval;
    return seeds;
}

std::vector<int> kmeans_deterministic(const Dataset& d, const FeatureSubset& subset,
                                      std::size_t p, const EvalConfig& cfg,
                                      std::vector<double>* objective_trace) {
    if (subset.empty()) throw std::invalid_argument("empty feature subset");
    subset.validate(d.m());
    cfg.validate();

    const std::size_t n = d.n();
    const std::size_t dim = subset.size();
    auto seeds = kmeans_seed_indices(n, p);

    std::vector<double> centroids(p * dim, 0.0);
    for (std::size_t c = 0; c < p; ++c)
        for (std::size_t j = 0; j < dim; ++j)
            centroids[c * dim + j] = d.at(seeds[c], static_cast<std::size_t>(subset.indices[j]));

    auto sq_dist_to_centroid = [&](std::size_t i, std::size_t c) {
        const double* row = d.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double diff = row[subset.indices[j]] - centroids[c * dim + j];
            s += diff * diff;
        }
        return s;
    };

    std::vector<int> assign(n, 0);
    std::vector<std::size_t> counts(p, 0);

    auto assign_all = [&]() {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < p; ++c) {
                double d2 = sq_dist_to_centroid(i, c);
                if (d2 < best) {
                    best = d2;
                    best_c = static_cast<int>(c);
                }
            }
            assign[i] = best_c;
            counts[static_cast<std::size_t>(best_c)] += 1;
        }
    };

    for (int iter = 0; iter < cfg.kmeans_max_iter; ++iter) {
        assign_all();

        // reseed empty clusters to the instance farthest from its nearest centroid
        std::vector<char> used(n, 0);
        for (std::size_t round = 0; round < p; ++round) {
            std::size_t empty = p;
            for (std::size_t c = 0; c < p; ++c)
                if (counts[c] == 0) {
                    empty = c;
                    break;
                }
            if (empty == p) break;

            double far_d2 = -1.0;
            std::size_t far_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (used[i]) continue;
                double nearest = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < p; ++c)
                    nearest = std::min(nearest, sq_dist_to_centroid(i, c));
                if (nearest > far_d2) {
                    far_d2 = nearest;
                    far_i = i;
                }
            }
            used[far_i] = 1;
            for (std::size_t j = 0; j < dim; ++j)
                centroids[empty * dim + j] =
                    d.at(far_i, static_cast<std::size_t>(subset.indices[j]));
            assign_all();
        }

        if (objective_trace) {
            double obj = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                obj += sq_dist_to_centroid(i, static_cast<std::size_t>(assign[i]));
            objective_trace->push_back(obj);
        }

        // update step; track the largest centroid movement
        std::vector<double> next(p * dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = d.row(i);
            auto c = static_cast<std::size_t>(assign[i]);
            for (std::size_t j = 0; j < dim; ++j) next[c * dim + j] += row[subset.indices[j]];
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < p; ++c) {
            if (counts[c] == 0) {
                for (std::size_t j = 0; j < dim; ++j) next[c * dim + j] = centroids[c * dim + j];
                continue;
            }
            double shift2 = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                next[c * dim + j] /= static_cast<double>(counts[c]);
                double diff = next[c * dim + j] - centroids[c * dim + j];
                shift2 += diff * diff;
            }
            max_shift = std::max(max_shift, std::sqrt(shift2));
        }
        centroids = std::move(next);
        if (max_shift < cfg.kmeans_tol) break;
    }
    assign_all();
    return assign;
}

double nmi(const std::vector<int>& labels, const std::vector<int>& clusters) {
    if (labels.size() != clusters.size() || labels.empty())
        throw std::invalid_argument("nmi: sequences must have equal nonzero length");

    const double n = static_cast<double>(labels.size());
    std::map<int, double> cl, cc;
    std::map<std::pair<int, int>, double> cj;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        cl[labels[i]] += 1.0;
        cc[clusters[i]] += 1.0;
        cj[{labels[i], clusters[i]}] += 1.0;
    }

    double hl = 0.0, hc = 0.0, mi = 0.0;
    for (auto& [k, c] : cl) hl -= (c / n) * std::log(c / n);
    for (auto& [k, c] : cc) hc -= (c / n) * std::log(c / n);
    for (auto& [k, c] : cj)
        mi += (c / n) * std::log(c * n / (cl[k.first] * cc[k.second]));

    if (hl + hc == 0.0) {
        // both partitions are single blocks over the same index set: identical
        return 1.0;
    }
    return std::clamp(2.0 * mi / (hl + hc), 0.0, 1.0);
}

EvaluationCurve performance_curve(const Dataset& d, const SelectionTrace& trace,
                                  Metric metric, const EvalConfig& cfg, int workers,
                                  std::vector<std::string>* warnings) {
    cfg.validate();
    if (trace.steps.empty()) throw std::invalid_argument("empty selection trace");

    const std::size_t points =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.max_top), trace.steps.size());

    EvaluationCurve curve;
    curve.metric = metric;
    curve.values.assign(points, 0.0);

    FoldAssignment folds;
    if (metric == Metric::AccuracyKnn) folds = stratified_folds(d, cfg.folds, cfg.seed);

    if (metric == Metric::AccuracyKnn) curve.fold_variance.assign(points, 0.0);

    std::vector<std::vector<std::string>> point_warnings(points);
    parallel_chunks(points, std::max(workers, 1), [&](std::size_t begin, std::size_t end) {
        std::vector<double> per_fold;
        for (std::size_t t = begin; t < end; ++t) {
            FeatureSubset subset = trace.selected(t + 1);
            if (metric == Metric::AccuracyKnn) {
                curve.values[t] = knn_accuracy(d, subset, folds, cfg.knn_k,
                                               warnings ? &point_warnings[t] : nullptr,
                                               &per_fold);
                double mean = 0.0, var = 0.0;
                for (double a : per_fold) mean += a;
                mean /= static_cast<double>(per_fold.size());
                for (double a : per_fold) var += (a - mean) * (a - mean);
                curve.fold_variance[t] = var / static_cast<double>(per_fold.size());
            } else {
                auto assign = kmeans_deterministic(d, subset, d.p(), cfg);
                curve.values[t] = nmi(d.labels(), assign);
            }
        }
    });
    if (warnings)
        for (auto& w : point_warnings)
            warnings->insert(warnings->end(), w.begin(), w.end());

    curve.max_value = *std::max_element(curve.values.begin(), curve.values.end());
    double sum = 0.0;
    for (double v : curve.values) sum += v;
    curve.ave_value = sum / static_cast<double>(points);
    return curve;
}

}  // namespace sepselect
