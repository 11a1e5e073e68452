#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hfseason/gam/fit.hpp"

namespace hfseason::gam {

struct LambdaGrid {
    double log10_min = -6.0;
    double log10_max = 6.0;
    int points = 25;
};

struct SelectionTrace {
    struct Visit {
        Eigen::VectorXd lambdas;
        double gcv = 0.0;
    };
    std::vector<Visit> grid_visits;    // every grid evaluation
    std::vector<Visit> refine_visits;  // golden-section evaluations
    int cycles = 0;
};

struct SelectionResult {
    Eigen::VectorXd lambdas;
    GamFit fit;
};

/// GCV smoothing-parameter selection: per-term coordinate descent over a
/// log10 grid, cycled until no argmin moves (max 10 cycles), then one
/// golden-section refinement per term. Ties prefer the larger lambda; the
/// returned fit is the best evaluation seen, so its score never exceeds any
/// visited grid score. Deterministic for identical inputs.
SelectionResult select_lambda(const Eigen::VectorXd& y, const std::vector<TermData>& terms,
                              const LambdaGrid& grid = {}, SelectionTrace* trace = nullptr);

SelectionResult select_lambda(const PenalizedDesign& design, const LambdaGrid& grid = {},
                              SelectionTrace* trace = nullptr);

}  // namespace hfseason::gam
