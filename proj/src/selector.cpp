#include "sepselect/selector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "detail_memberships.hpp"
#include "sepselect/parallel.hpp"

namespace sepselect {
namespace {

constexpr double kGainTie = 1e-12;

/**
 * Incremental scorer for the greedy loop. For the current subset S it caches
 *   inst_dot(i,a,b) = V_ia . V_ib   (V_ia = centroid_a - x_i, on S; the
 *                                    diagonal holds squared distances)
 *   cent_dot(q,a,b) = (c_a - c_q) . (c_b - c_q)  on S
 * Scoring S u {f} only needs the rank-1 column contribution on top of the
 * cached sums, so a candidate costs O(n p^2 + p^3) regardless of |S|.
 */
class GreedyEngine {
public:
    GreedyEngine(const Dataset& d, const ClassPartition& part, const SeparabilityParams& params)
        : d_(d), params_(params), n_(d.n()), m_(d.m()), p_(part.classes.size()) {
        own_.assign(n_, -1);
        for (std::size_t q = 0; q < p_; ++q) {
            if (part.classes[q].empty()) throw std::invalid_argument("empty class in partition");
            for (int i : part.classes[q]) own_[static_cast<std::size_t>(i)] = static_cast<int>(q);
        }
        for (int o : own_)
            if (o < 0) throw std::invalid_argument("partition does not cover every instance");

        // per-class column means, used as centroid coordinates per candidate
        col_mean_.assign(p_ * m_, 0.0);
        std::vector<double> counts(p_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* row = d.row(i);
            auto q = static_cast<std::size_t>(own_[i]);
            counts[q] += 1.0;
            for (std::size_t j = 0; j < m_; ++j) col_mean_[q * m_ + j] += row[j];
        }
        for (std::size_t q = 0; q < p_; ++q)
            for (std::size_t j = 0; j < m_; ++j) col_mean_[q * m_ + j] /= counts[q];

        inst_dot_.assign(n_ * p_ * p_, 0.0);
        cent_dot_.assign(p_ * p_ * p_, 0.0);
    }

    std::size_t p() const { return p_; }

    // vf layout: n*p with vf[i*p+a] = col_mean(a,f) - x(i,f); cf: p class means of column f.
    void fill_column_deltas(int f, double* vf, double* cf) const {
        auto fj = static_cast<std::size_t>(f);
        for (std::size_t a = 0; a < p_; ++a) cf[a] = col_mean_[a * m_ + fj];
        for (std::size_t i = 0; i < n_; ++i) {
            double x = d_.row(i)[fj];
            for (std::size_t a = 0; a < p_; ++a) vf[i * p_ + a] = cf[a] - x;
        }
    }

    // reusable per-thread buffers for score()
    struct Scratch {
        std::vector<double> d2, mu, cd2, mubar;
        std::vector<int> nn;
        std::vector<char> mubar_done;

        explicit Scratch(std::size_t p)
            : d2(p), mu(p), cd2(p * p), mubar(p * p), nn(p), mubar_done(p) {}
    };

    // Score of the current subset (vf/cf null) or of subset + one column.
    SeparabilityScore score(const double* vf, const double* cf, Scratch& s) const {
        const double eps = params_.eps_norm;
        const double eps2 = eps * eps;
        SeparabilityScore out;

        double* d2 = s.d2.data();
        double* mu = s.mu.data();
        double theta_dis = 0.0, theta_dir = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* base = inst_dot_.data() + i * p_ * p_;
            const double* vfi = vf ? vf + i * p_ : nullptr;
            for (std::size_t a = 0; a < p_; ++a)
                d2[a] = base[a * p_ + a] + (vfi ? vfi[a] * vfi[a] : 0.0);

            auto q_own = static_cast<std::size_t>(own_[i]);
            double n_own = std::sqrt(d2[q_own]);
            theta_dis += n_own;

            if (n_own < eps) continue;
            detail::memberships_from_sq_dists(d2, p_, eps2, -1, mu);
            for (std::size_t q2 = 0; q2 < p_; ++q2) {
                double n_other = std::sqrt(d2[q2]);
                if (n_other < eps) continue;
                double dot = base[q_own * p_ + q2] + (vfi ? vfi[q_own] * vfi[q2] : 0.0);
                double cos = std::clamp(dot / (n_own * n_other), -1.0, 1.0);
                theta_dir += mu[q2] * (1.0 - cos);
            }
        }
        out.theta_dis = theta_dis / static_cast<double>(n_);
        out.theta_dir = theta_dir / static_cast<double>(n_);

        // centroid geometry
        double* cd2 = s.cd2.data();
        for (std::size_t q = 0; q < p_; ++q)
            for (std::size_t a = 0; a < p_; ++a) {
                double delta = cf ? (cf[a] - cf[q]) * (cf[a] - cf[q]) : 0.0;
                cd2[q * p_ + a] = cent_dot_[(q * p_ + a) * p_ + a] + delta;
            }

        int* nn = s.nn.data();
        for (std::size_t q = 0; q < p_; ++q) {
            double best = std::numeric_limits<double>::infinity();
            nn[q] = -1;
            for (std::size_t a = 0; a < p_; ++a) {
                if (a == q) continue;
                if (cd2[q * p_ + a] < best) {
                    best = cd2[q * p_ + a];
                    nn[q] = static_cast<int>(a);
                }
            }
        }

        double lambda_dis = 0.0;
        for (std::size_t q = 0; q < p_; ++q)
            lambda_dis += std::sqrt(cd2[q * p_ + static_cast<std::size_t>(nn[q])]);
        out.lambda_dis = lambda_dis / static_cast<double>(p_);

        double lambda_dir = 0.0;
        if (p_ > 2) {
            std::fill(s.mubar_done.begin(), s.mubar_done.end(), 0);
            for (std::size_t q = 0; q < p_; ++q) {
                auto qn = static_cast<std::size_t>(nn[q]);
                double n_near = std::sqrt(cd2[q * p_ + qn]);
                if (n_near < eps) continue;

                double* mubar = s.mubar.data() + qn * p_;
                if (!s.mubar_done[qn]) {
                    detail::memberships_from_sq_dists(cd2 + qn * p_, p_, eps2,
                                                      static_cast<int>(qn), mubar);
                    s.mubar_done[qn] = 1;
                }

                for (std::size_t q2 = 0; q2 < p_; ++q2) {
                    if (q2 == q || q2 == qn) continue;
                    double n_other = std::sqrt(cd2[q * p_ + q2]);
                    if (n_other < eps) continue;
                    double delta = cf ? (cf[qn] - cf[q]) * (cf[q2] - cf[q]) : 0.0;
                    double dot = cent_dot_[(q * p_ + qn) * p_ + q2] + delta;
                    double cos = std::clamp(dot / (n_near * n_other), -1.0, 1.0);
                    lambda_dir += mubar[q2] * (1.0 - cos);
                }
            }
        }
        out.lambda_dir = lambda_dir / static_cast<double>(p_);

        out.sep = compose_sep(out.theta_dis, out.theta_dir, out.lambda_dis, out.lambda_dir,
                              params_);
        return out;
    }

    // Fold an accepted column into the cached sums.
    void accept(const double* vf, const double* cf) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double* vfi = vf + i * p_;
            double* base = inst_dot_.data() + i * p_ * p_;
            for (std::size_t a = 0; a < p_; ++a)
                for (std::size_t b = 0; b < p_; ++b) base[a * p_ + b] += vfi[a] * vfi[b];
        }
        for (std::size_t q = 0; q < p_; ++q)
            for (std::size_t a = 0; a < p_; ++a)
                for (std::size_t b = 0; b < p_; ++b)
                    cent_dot_[(q * p_ + a) * p_ + b] += (cf[a] - cf[q]) * (cf[b] - cf[q]);
    }

private:
    const Dataset& d_;
    SeparabilityParams params_;
    std::size_t n_, m_, p_;
    std::vector<int> own_;
    std::vector<double> col_mean_;  // p*m
    std::vector<double> inst_dot_;  // n*p*p
    std::vector<double> cent_dot_;  // p*p*p
};

}  // namespace

FeatureSubset SelectionTrace::selected() const { return selected(steps.size()); }

FeatureSubset SelectionTrace::selected(std::size_t t) const {
    FeatureSubset s;
    s.indices.reserve(std::min(t, steps.size()));
    for (std::size_t i = 0; i < steps.size() && i < t; ++i)
        s.indices.push_back(steps[i].feature_index);
    return s;
}

double gain(const Dataset& d, const ClassPartition& part, const FeatureSubset& subset,
            int candidate, const SeparabilityParams& params) {
    if (candidate < 0 || static_cast<std::size_t>(candidate) >= d.m())
        throw std::invalid_argument("candidate feature index out of range");
    for (int idx : subset.indices)
        if (idx == candidate)
            throw std::invalid_argument("candidate " + std::to_string(candidate) +
                                        " already selected");
    FeatureSubset extended = subset;
    extended.indices.push_back(candidate);
    return separability(d, part, extended, params).sep -
           separability(d, part, subset, params).sep;
}

SelectionTrace select(const Dataset& d, const ClassPartition& part, int k,
                      const SeparabilityParams& params, int workers) {
    params.validate();
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (static_cast<std::size_t>(k) > d.m())
        throw std::invalid_argument("k=" + std::to_string(k) + " exceeds feature count m=" +
                                    std::to_string(d.m()));
    if (part.classes.size() < 2) throw std::invalid_argument("need at least 2 classes");

    SelectionTrace trace;
    trace.params = params;
    trace.k = k;

    GreedyEngine engine(d, part, params);
    const std::size_t m = d.m();
    const std::size_t p = engine.p();
    const int nworkers = std::max(workers, 1);

    std::vector<char> selected(m, 0);
    std::vector<double> gains(m, 0.0);
    std::vector<SeparabilityScore> scores(m);
    std::vector<int> candidates;
    candidates.reserve(m);

    double prev_sep = 0.0;  // Sep(empty) := 0
    std::vector<double> accept_vf(d.n() * p), accept_cf(p);

    for (int step = 0; step < k; ++step) {
        candidates.clear();
        for (std::size_t f = 0; f < m; ++f)
            if (!selected[f]) candidates.push_back(static_cast<int>(f));

        parallel_chunks(candidates.size(), nworkers,
                        [&](std::size_t begin, std::size_t end) {
                            std::vector<double> vf(d.n() * p), cf(p);
                            GreedyEngine::Scratch scratch(p);
                            for (std::size_t c = begin; c < end; ++c) {
                                int f = candidates[c];
                                engine.fill_column_deltas(f, vf.data(), cf.data());
                                SeparabilityScore s =
                                    engine.score(vf.data(), cf.data(), scratch);
                                scores[static_cast<std::size_t>(f)] = s;
                                gains[static_cast<std::size_t>(f)] = s.sep - prev_sep;
                            }
                        });
        trace.candidate_evaluations += candidates.size();

        // winner: max gain, ties within kGainTie to the smallest index
        int best = candidates.front();
        for (std::size_t c = 1; c < candidates.size(); ++c) {
            int f = candidates[c];
            if (gains[static_cast<std::size_t>(f)] >
                gains[static_cast<std::size_t>(best)] + kGainTie)
                best = f;
        }

        auto bf = static_cast<std::size_t>(best);
        trace.steps.push_back({best, gains[bf], scores[bf]});
        selected[bf] = 1;
        prev_sep = scores[bf].sep;

        engine.fill_column_deltas(best, accept_vf.data(), accept_cf.data());
        engine.accept(accept_vf.data(), accept_cf.data());
    }
    return trace;
}

}  // namespace sepselect
