#ifndef SEPSELECT_SEPARABILITY_HPP
#define SEPSELECT_SEPARABILITY_HPP

#include <span>
#include <string>
#include <vector>

#include "sepselect/dataset.hpp"

namespace sepselect {

/// Which terms of the criterion participate in the composed score.
enum class Variant {
    Full,          // (lambda_dis + beta*lambda_dir) / (theta_dis + alpha*theta_dir)
    NoDirWithin,   // directional within-class term dropped from the denominator
    NoDirBetween,  // directional between-class term dropped from the numerator
    DistanceOnly,  // both directional terms dropped
};

Variant variant_from_string(const std::string& s);
std::string to_string(Variant v);

struct SeparabilityParams {
    double alpha = 1.0;
    double beta = 1.0;
    Variant variant = Variant::Full;
    double eps_norm = 1e-12;  // below this, a vector/distance counts as degenerate
    double eps_div = 1e-12;   // floor for the composed denominator

    void validate() const;  // throws std::invalid_argument
};

/// Ordered, duplicate-free feature column indices.
struct FeatureSubset {
    std::vector<int> indices;

    bool empty() const { return indices.empty(); }
    std::size_t size() const { return indices.size(); }
    void validate(std::size_t m) const;  // bounds + duplicate check
};

/// Per-class mean vectors restricted to a feature subset.
struct Centroids {
    std::vector<std::vector<double>> points;  // p vectors of length subset.size()
    FeatureSubset subset;

    std::size_t p() const { return points.size(); }
};

struct SeparabilityScore {
    double theta_dis = 0.0;
    double theta_dir = 0.0;
    double lambda_dis = 0.0;
    double lambda_dir = 0.0;
    double sep = 0.0;
};

Centroids class_centroids(const Dataset& d, const ClassPartition& part,
                          const FeatureSubset& subset);

/// Cosine similarity clamped to [-1,1]; 1 when either norm is below eps_norm.
double cosine(std::span<const double> u, std::span<const double> v, double eps_norm);

/**
 * Fuzzy membership of instance i to every class, from inverse squared
 * centroid distances. If the instance coincides with one or more centroids
 * (distance < eps_norm) the mass is split equally among those classes.
 * Components sum to 1.
 */
std::vector<double> instance_memberships(const Dataset& d, const Centroids& cents,
                                         std::size_t i, const FeatureSubset& subset,
                                         double eps_norm = 1e-12);

/// Mean Euclidean distance from each instance to its own class centroid.
double within_compactness_distance(const Dataset& d, const ClassPartition& part,
                                   const Centroids& cents, const FeatureSubset& subset);

/**
 * Membership-weighted angular misalignment between each instance's vector to
 * its own centroid and its vectors to the other centroids. Degenerate
 * vectors contribute no penalty (cosine convention).
 */
double within_compactness_direction(const Dataset& d, const ClassPartition& part,
                                    const Centroids& cents, const FeatureSubset& subset,
                                    double eps_norm = 1e-12);

/// Index of the nearest other class per class; ties go to the smaller index.
std::vector<int> nearest_class(const Centroids& cents);

/// Mean distance from each centroid to its nearest foreign centroid.
double between_separation_distance(const Centroids& cents);

/**
 * Membership of centroid q_prime to every class: 1 to itself, and inverse
 * squared distance shares over the remaining classes (they sum to 1).
 * Coincident centroids follow the same eps_norm convention as instances.
 */
std::vector<double> centroid_memberships(const Centroids& cents, int q_prime,
                                         double eps_norm = 1e-12);

/**
 * Membership-weighted angular overlap between each class's direction to its
 * nearest class and its directions to the remaining classes. Zero when p = 2.
 */
double between_separation_direction(const Centroids& cents, double eps_norm = 1e-12);

/**
 * Full separability score on a feature subset. The empty subset scores zero
 * by convention so that the first greedy gain equals the singleton score.
 */
SeparabilityScore separability(const Dataset& d, const ClassPartition& part,
                               const FeatureSubset& subset,
                               const SeparabilityParams& params);

/// Compose the four components into Sep for the given parameters.
double compose_sep(double theta_dis, double theta_dir, double lambda_dis,
                   double lambda_dir, const SeparabilityParams& params);

}  // namespace sepselect

#endif
