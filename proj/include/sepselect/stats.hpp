#ifndef SEPSELECT_STATS_HPP
#define SEPSELECT_STATS_HPP

#include <stdexcept>
#include <vector>

namespace sepselect {

/// N datasets x s algorithms scores with per-row ranks and column means.
struct RankTable {
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<double>> ranks;  // 1 = best, ties averaged
    std::vector<double> avg_ranks;

    std::size_t datasets() const { return scores.size(); }
    std::size_t algorithms() const { return scores.empty() ? 0 : scores[0].size(); }
};

struct FriedmanResult {
    double chi2 = 0.0;
    double f_stat = 0.0;
    int dof1 = 0;  // s-1
    int dof2 = 0;  // (s-1)(N-1)

    bool significant(double critical_value) const { return f_stat > critical_value; }
};

/// Raised when N(s-1) - chi2 <= 0 (perfect agreement across datasets).
class FriedmanDegenerate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RankTable rank_rows(const std::vector<std::vector<double>>& scores,
                    bool higher_is_better);

FriedmanResult friedman(const RankTable& table);

/// Nemenyi critical difference q_alpha * sqrt(s(s+1)/(6N)).
double nemenyi_cd(int s, int N, double q_alpha);

/// Two-tailed Nemenyi q constants for alpha in {0.05, 0.10}, s in 2..10.
double nemenyi_q_alpha(double alpha, int s);

}  // namespace sepselect

#endif
