#include "sepselect/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sepselect {

RankTable rank_rows(const std::vector<std::vector<double>>& scores, bool higher_is_better) {
    if (scores.size() < 2) throw std::invalid_argument("need at least 2 datasets (rows)");
    std::size_t s = scores[0].size();
    if (s < 2) throw std::invalid_argument("need at least 2 algorithms (columns)");

    RankTable table;
    table.scores = scores;
    table.ranks.assign(scores.size(), std::vector<double>(s, 0.0));

    for (std::size_t r = 0; r < scores.size(); ++r) {
        const auto& row = scores[r];
        if (row.size() != s) throw std::invalid_argument("ragged score table");
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("non-finite score in row " + std::to_string(r + 1));

        std::vector<std::size_t> order(s);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return higher_is_better ? row[a] > row[b] : row[a] < row[b];
        });

        // ties share the mean of their rank positions
        std::size_t i = 0;
        while (i < s) {
            std::size_t j = i;
            while (j + 1 < s && row[order[j + 1]] == row[order[i]]) ++j;
            double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
            for (std::size_t t = i; t <= j; ++t) table.ranks[r][order[t]] = avg;
            i = j + 1;
        }
    }

    table.avg_ranks.assign(s, 0.0);
    for (const auto& row : table.ranks)
        for (std::size_t j = 0; j < s; ++j) table.avg_ranks[j] += row[j];
    for (double& r : table.avg_ranks) r /= static_cast<double>(scores.size());
    return table;
}

FriedmanResult friedman(const RankTable& table) {
    auto N = static_cast<double>(table.datasets());
    auto s = static_cast<double>(table.algorithms());
    if (N < 2 || s < 2) throw std::invalid_argument("rank table too small for the Friedman test");

    double sum_sq = 0.0;
    for (double r : table.avg_ranks) sum_sq += r * r;
    double chi2 = 12.0 * N / (s * (s + 1.0)) * (sum_sq - s * (s + 1.0) * (s + 1.0) / 4.0);
    chi2 = std::max(chi2, 0.0);

    double denom = N * (s - 1.0) - chi2;
    if (denom <= 0.0)
        throw FriedmanDegenerate(
            "Friedman statistic undefined: N(s-1) - chi2 <= 0 (perfect agreement)");

    FriedmanResult result;
    result.chi2 = chi2;
    result.f_stat = (N - 1.0) * chi2 / denom;
    result.dof1 = static_cast<int>(s) - 1;
    result.dof2 = (static_cast<int>(s) - 1) * (static_cast<int>(N) - 1);
    return result;
}

double nemenyi_cd(int s, int N, double q_alpha) {
    if (s < 2) throw std::invalid_argument("need at least 2 algorithms");
    if (N < 1) throw std::invalid_argument("need at least 1 dataset");
    if (q_alpha < 0.0) throw std::invalid_argument("q_alpha must be non-negative");
    return q_alpha * std::sqrt(static_cast<double>(s) * (s + 1.0) / (6.0 * N));
}

double nemenyi_q_alpha(double alpha, int s) {
    // two-tailed Nemenyi constants (Studentized range / sqrt(2))
    static constexpr double q05[] = {1.960, 2.343, 2.569, 2.728, 2.850,
                                     2.949, 3.031, 3.102, 3.164};
    static constexpr double q10[] = {1.645, 2.052, 2.291, 2.459, 2.589,
                                     2.693, 2.780, 2.855, 2.920};
    if (s < 2 || s > 10)
        throw std::invalid_argument("q_alpha table covers s in 2..10; pass q explicitly");
    if (std::abs(alpha - 0.05) < 1e-9) return q05[s - 2];
    if (std::abs(alpha - 0.10) < 1e-9) return q10[s - 2];
    throw std::invalid_argument("q_alpha table covers alpha in {0.05, 0.10}; pass q explicitly");
}

}  // namespace sepselect
