#ifndef GOVPAT_SAMPLING_HPP
#define GOVPAT_SAMPLING_HPP

#include <cstddef>
#include <deque>

namespace govpat {

/// The last L similarity values of a stream, oldest first. Values are
/// oriented so that a drop means the stream fits the pattern worse
/// (callers push the negated match score).
class SimilarityHistory {
public:
    explicit SimilarityHistory(std::size_t capacity);

    void push(double similarity);
    std::size_t size() const { return buf_.size(); }
    std::size_t capacity() const { return cap_; }
    /// 0 = oldest surviving entry.
    double operator[](std::size_t i) const { return buf_[i]; }

private:
    std::size_t cap_;
    std::deque<double> buf_;
};

enum class QueryStrategy { Linear, Exponential };

struct QueryConfig {
    QueryStrategy strategy = QueryStrategy::Linear;
    double threshold = 0.6;
    std::size_t history_capacity = 10;
};

/// Tumbling per-window query allowance. position_in_window stays below
/// window_size; crossing the boundary resets both counters.
struct BudgetState {
    std::size_t window_size = 100;
    std::size_t budget = 30;
    std::size_t used_in_window = 0;
    std::size_t position_in_window = 0;
};

/// Query iff the fraction of consecutive drops in the history reaches
/// the threshold: q = 1 + #drops, fire when q / L >= threshold.
/// Histories shorter than 2 never fire.
int linear_query(const SimilarityHistory& history, double threshold);

/// Like linear_query but consecutive drops weigh exponentially more:
/// starting from c = q = 1, each step multiplies q by c, then doubles c
/// on a drop and halves it otherwise; fire when q / 2^(L-1) >= threshold.
/// Histories shorter than 2 never fire.
int exponential_query(const SimilarityHistory& history, double threshold);

struct QueryDecision {
    int decision = 0;
    /// What the strategy asked for before the budget gate.
    int demanded = 0;
    BudgetState budget;
};

/// Run the configured strategy and gate it by the remaining window
/// budget, then advance the window position. Returns the decision and
/// the advanced budget state.
QueryDecision decide_query(const SimilarityHistory& history, const QueryConfig& cfg,
                           BudgetState budget);

}  // namespace govpat

#endif
