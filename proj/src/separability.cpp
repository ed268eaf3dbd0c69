#include "sepselect/separability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "detail_memberships.hpp"

namespace sepselect {
namespace {

// squared Euclidean distance between an instance row and a centroid, on the
// subset columns
double sq_dist_to_centroid(const Dataset& d, std::size_t i, const std::vector<double>& cent,
                           const FeatureSubset& subset) {
    const double* row = d.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < subset.indices.size(); ++j) {
        double diff = row[subset.indices[j]] - cent[j];
        s += diff * diff;
    }
    return s;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

std::vector<int> ownership(const ClassPartition& part, std::size_t n) {
    std::vector<int> own(n, -1);
    for (std::size_t q = 0; q < part.classes.size(); ++q)
        for (int i : part.classes[q]) own[static_cast<std::size_t>(i)] = static_cast<int>(q);
    for (int o : own)
        if (o < 0) throw std::invalid_argument("partition does not cover every instance");
    return own;
}

}  // namespace

Variant variant_from_string(const std::string& s) {
    if (s == "full") return Variant::Full;
    if (s == "no-dir-within") return Variant::NoDirWithin;
    if (s == "no-dir-between") return Variant::NoDirBetween;
    if (s == "distance-only") return Variant::DistanceOnly;
    throw std::invalid_argument("unknown variant: " + s);
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Full: return "full";
        case Variant::NoDirWithin: return "no-dir-within";
        case Variant::NoDirBetween: return "no-dir-between";
        case Variant::DistanceOnly: return "distance-only";
    }
    return "full";
}

void SeparabilityParams::validate() const {
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("alpha and beta must be non-negative");
    if (!(eps_norm > 0.0) || !(eps_div > 0.0))
        throw std::invalid_argument("eps_norm and eps_div must be positive");
}

void FeatureSubset::validate(std::size_t m) const {
    std::unordered_set<int> seen;
    for (int idx : indices) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= m)
            throw std::invalid_argument("feature index " + std::to_string(idx) +
                                        " out of range (m=" + std::to_string(m) + ")");
        if (!seen.insert(idx).second)
            throw std::invalid_argument("duplicate feature index " + std::to_string(idx));
    }
}

Centroids class_centroids(const Dataset& d, const ClassPartition& part,
                          const FeatureSubset& subset) {
    if (subset.empty()) throw std::invalid_argument("empty feature subset");
    subset.validate(d.m());

    Centroids out;
    out.subset = subset;
    out.points.assign(part.classes.size(), std::vector<double>(subset.size(), 0.0));
    for (std::size_t q = 0; q < part.classes.size(); ++q) {
        if (part.classes[q].empty()) throw std::invalid_argument("empty class in partition");
        for (int i : part.classes[q]) {
            const double* row = d.row(static_cast<std::size_t>(i));
            for (std::size_t j = 0; j < subset.size(); ++j)
                out.points[q][j] += row[subset.indices[j]];
        }
        for (double& c : out.points[q]) c /= static_cast<double>(part.classes[q].size());
    }
    return out;
}

double cosine(std::span<const double> u, std::span<const double> v, double eps_norm) {
    if (u.size() != v.size()) throw std::invalid_argument("cosine: length mismatch");
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        uu += u[j] * u[j];
        vv += v[j] * v[j];
        uv += u[j] * v[j];
    }
    if (std::sqrt(uu) < eps_norm || std::sqrt(vv) < eps_norm) return 1.0;
    return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

std::vector<double> instance_memberships(const Dataset& d, const Centroids& cents,
                                         std::size_t i, const FeatureSubset& subset,
                                         double eps_norm) {
    std::size_t p = cents.p();
    std::vector<double> d2(p, 0.0);
    for (std::size_t q = 0; q < p; ++q)
        d2[q] = sq_dist_to_centroid(d, i, cents.points[q], subset);
    std::vector<double> mu(p, 0.0);
    detail::memberships_from_sq_dists(d2.data(), p, eps_norm * eps_norm, -1, mu.data());
    return mu;
}

double within_compactness_distance(const Dataset& d, const ClassPartition& part,
                                   const Centroids& cents, const FeatureSubset& subset) {
    auto own = ownership(part, d.n());
    double total = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i)
        total += std::sqrt(sq_dist_to_centroid(d, i, cents.points[own[i]], subset));
    return total / static_cast<double>(d.n());
}

double within_compactness_direction(const Dataset& d, const ClassPartition& part,
                                    const Centroids& cents, const FeatureSubset& subset,
                                    double eps_norm) {
    std::size_t p = cents.p();
    if (p < 2) throw std::invalid_argument("need at least 2 classes");
    auto own = ownership(part, d.n());
    const double eps2 = eps_norm * eps_norm;

    std::vector<double> d2(p), mu(p);
    double total = 0.0;
    for (std::size_t i = 0; i < d.n(); ++i) {
        for (std::size_t q = 0; q < p; ++q)
            d2[q] = sq_dist_to_centroid(d, i, cents.points[q], subset);
        detail::memberships_from_sq_dists(d2.data(), p, eps2, -1, mu.data());

        auto q_own = static_cast<std::size_t>(own[i]);
        double n_own = std::sqrt(d2[q_own]);
        if (n_own < eps_norm) continue;  // degenerate own vector: no penalty

        const double* row = d.row(i);
        for (std::size_t q2 = 0; q2 < p; ++q2) {
            double n_other = std::sqrt(d2[q2]);
            if (n_other < eps_norm) continue;
            double dot = 0.0;
            for (std::size_t j = 0; j < subset.size(); ++j) {
                double a = cents.points[q_own][j] - row[subset.indices[j]];
                double b = cents.points[q2][j] - row[subset.indices[j]];
                dot += a * b;
            }
            double cos = std::clamp(dot / (n_own * n_other), -1.0, 1.0);
            total += mu[q2] * (1.0 - cos);
        }
    }
    return total / static_cast<double>(d.n());
}

std::vector<int> nearest_class(const Centroids& cents) {
    std::size_t p = cents.p();
    if (p < 2) throw std::invalid_argument("need at least 2 classes");
    std::vector<int> nn(p, -1);
    for (std::size_t q = 0; q < p; ++q) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t q2 = 0; q2 < p; ++q2) {
            if (q2 == q) continue;
            double d2 = sq_dist(cents.points[q], cents.points[q2]);
            if (d2 < best) {
                best = d2;
                nn[q] = static_cast<int>(q2);
            }
        }
    }
    return nn;
}

double between_separation_distance(const Centroids& cents) {
    auto nn = nearest_class(cents);
    double total = 0.0;
    for (std::size_t q = 0; q < cents.p(); ++q)
        total += std::sqrt(sq_dist(cents.points[q], cents.points[nn[q]]));
    return total / static_cast<double>(cents.p());
}

std::vector<double> centroid_memberships(const Centroids& cents, int q_prime,
                                         double eps_norm) {
    std::size_t p = cents.p();
    if (p < 2) throw std::invalid_argument("need at least 2 classes");
    if (q_prime < 0 || static_cast<std::size_t>(q_prime) >= p)
        throw std::invalid_argument("class index out of range");
    std::vector<double> d2(p, 0.0);
    for (std::size_t q = 0; q < p; ++q)
        d2[q] = sq_dist(cents.points[static_cast<std::size_t>(q_prime)], cents.points[q]);
    std::vector<double> mu(p, 0.0);
    detail::memberships_from_sq_dists(d2.data(), p, eps_norm * eps_norm, q_prime, mu.data());
    return mu;
}

double between_separation_direction(const Centroids& cents, double eps_norm) {
    std::size_t p = cents.p();
    if (p < 2) throw std::invalid_argument("need at least 2 classes");
    if (p == 2) return 0.0;  // no admissible third class

    auto nn = nearest_class(cents);
    std::vector<std::vector<double>> mubar_cache(p);
    double total = 0.0;
    for (std::size_t q = 0; q < p; ++q) {
        auto qn = static_cast<std::size_t>(nn[q]);
        double n_near = std::sqrt(sq_dist(cents.points[q], cents.points[qn]));
        if (n_near < eps_norm) continue;

        if (mubar_cache[qn].empty())
            mubar_cache[qn] = centroid_memberships(cents, static_cast<int>(qn), eps_norm);
        const auto& mubar = mubar_cache[qn];

        for (std::size_t q2 = 0; q2 < p; ++q2) {
            if (q2 == q || q2 == qn) continue;
            double n_other = std::sqrt(sq_dist(cents.points[q], cents.points[q2]));
            if (n_other < eps_norm) continue;
            double dot = 0.0;
            for (std::size_t j = 0; j < cents.points[q].size(); ++j) {
                double a = cents.points[qn][j] - cents.points[q][j];
                double b = cents.points[q2][j] - cents.points[q][j];
                dot += a * b;
            }
            double cos = std::clamp(dot / (n_near * n_other), -1.0, 1.0);
            total += mubar[q2] * (1.0 - cos);
        }
    }
    return total / static_cast<double>(p);
}

double compose_sep(double theta_dis, double theta_dir, double lambda_dis,
                   double lambda_dir, const SeparabilityParams& params) {
    double num = lambda_dis;
    double den = theta_dis;
    if (params.variant == Variant::Full || params.variant == Variant::NoDirWithin)
        num += params.beta * lambda_dir;
    if (params.variant == Variant::Full || params.variant == Variant::NoDirBetween)
        den += params.alpha * theta_dir;
    return num / std::max(den, params.eps_div);
}

SeparabilityScore separability(const Dataset& d, const ClassPartition& part,
                               const FeatureSubset& subset, const SeparabilityParams& params) {
    params.validate();
    if (part.classes.size() < 2) throw std::invalid_argument("need at least 2 classes");

    SeparabilityScore score;
    if (subset.empty()) return score;  // Sep(empty) := 0

    auto cents = class_centroids(d, part, subset);
    score.theta_dis = within_compactness_distance(d, part, cents, subset);
    score.theta_dir = within_compactness_direction(d, part, cents, subset, params.eps_norm);
    score.lambda_dis = between_separation_distance(cents);
    score.lambda_dir = between_separation_direction(cents, params.eps_norm);
    score.sep = compose_sep(score.theta_dis, score.theta_dir, score.lambda_dis,
                            score.lambda_dir, params);
    return score;
}

}  // namespace sepselect
