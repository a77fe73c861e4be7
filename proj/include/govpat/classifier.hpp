#ifndef GOVPAT_CLASSIFIER_HPP
#define GOVPAT_CLASSIFIER_HPP

#include "govpat/matching.hpp"
#include "govpat/model.hpp"

namespace govpat {

struct LearningConfig {
    /// Step size of the curve-point updates.
    double alpha = 0.5;
    bool enabled = true;
};

struct PredictionOutcome {
    int predicted_class = 0;
    MatchResult match;
    /// Projection of the shifted newest sample onto the predicted curve.
    Projection projection;
    /// The newest sample after window normalization and offset shift;
    /// the curve update needs it to form the error vector.
    CurvePoint shifted_newest;
};

/// Match the window against the pattern, shift its newest sample by the
/// found offset, and label it with the class of the nearest curve.
/// Distance ties resolve to the lowest class id.
PredictionOutcome predict_label(const Window& w, const GoverningPattern& pattern,
                                const MatchConfig& cfg);

/// Move the two endpoints of the segment the projection foot lies on,
/// by alpha times the error vector (shifted sample minus foot): toward
/// the sample when the prediction was right, away from it when it was
/// wrong. Times are then clamped so every curve stays strictly
/// monotone. Only the predicted-class curve changes; a disabled config
/// returns the pattern untouched.
GoverningPattern apply_update(GoverningPattern pattern, const PredictionOutcome& outcome,
                              bool correct, const LearningConfig& cfg);

/// apply_update with correctness derived from the revealed label.
/// Throws InvalidClass when true_class is not a class of the pattern.
GoverningPattern online_update(GoverningPattern pattern, const PredictionOutcome& outcome,
                               int true_class, const LearningConfig& cfg);

}  // namespace govpat

#endif
