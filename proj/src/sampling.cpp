#include "govpat/sampling.hpp"

#include <cmath>

#include "govpat/errors.hpp"

namespace govpat {

SimilarityHistory::SimilarityHistory(std::size_t capacity) : cap_(capacity) {
    if (capacity == 0) throw Error("history capacity must be positive");
}

void SimilarityHistory::push(double similarity) {
    if (buf_.size() == cap_) buf_.pop_front();
    buf_.push_back(similarity);
}

int linear_query(const SimilarityHistory& history, double threshold) {
    const std::size_t n = history.size();
    if (n < 2) return 0;
    std::size_t q = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (history[i] < history[i - 1]) ++q;
    return static_cast<double>(q) / static_cast<double>(n) >= threshold ? 1 : 0;
}

int exponential_query(const SimilarityHistory& history, double threshold) {
    const std::size_t n = history.size();
    if (n < 2) return 0;
    double c = 1.0;
    double q = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        q *= c;
        if (history[i] < history[i - 1])
            c *= 2.0;
        else
            c /= 2.0;
    }
    const double ceiling = std::ldexp(1.0, static_cast<int>(n) - 1);  // 2^(n-1)
    return q / ceiling >= threshold ? 1 : 0;
}

QueryDecision decide_query(const SimilarityHistory& history, const QueryConfig& cfg,
                           BudgetState budget) {
    if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0))
        throw Error("query threshold must lie in [0, 1]");
    if (cfg.history_capacity < 2) throw Error("history capacity must be at least 2");
    if (budget.window_size == 0) throw Error("budget window size must be positive");

    const int raw = cfg.strategy == QueryStrategy::Linear
                        ? linear_query(history, cfg.threshold)
                        : exponential_query(history, cfg.threshold);
    QueryDecision out;
    out.demanded = raw;
    out.decision = (raw == 1 && budget.used_in_window < budget.budget) ? 1 : 0;
    if (out.decision == 1) ++budget.used_in_window;
    ++budget.position_in_window;
    if (budget.position_in_window >= budget.window_size) {
        budget.position_in_window = 0;
        budget.used_in_window = 0;
    }
    out.budget = budget;
    return out;
}

}  // namespace govpat
