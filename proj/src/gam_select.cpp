#include <cmath>
#include <limits>

#include "hfseason/errors.hpp"
#include "hfseason/gam/select.hpp"

namespace hfseason::gam {

namespace {

// Near-zero GCV scores (perfect fits up to roundoff) are treated as ties so
// the largest-lambda rule can act; the threshold sits far below any
// meaningful GCV difference on non-degenerate data.
struct BestTracker {
    double tie_tol = 0.0;

    double best_score = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_lambdas;

    // Candidate ordering within ties: larger lambda vector wins (compared
    // lexicographically), which realizes the documented tie rule.
    bool consider(double score, const Eigen::VectorXd& lambdas) {
        if (score < best_score - tie_tol) {
            best_score = score;
            best_lambdas = lambdas;
            return true;
        }
        if (score <= best_score + tie_tol) {
            for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
                if (lambdas(i) > best_lambdas(i)) {
                    best_score = std::min(best_score, score);
                    best_lambdas = lambdas;
                    return true;
                }
                if (lambdas(i) < best_lambdas(i)) return false;
            }
        }
        return false;
    }
};

}  // namespace

SelectionResult select_lambda(const PenalizedDesign& design, const LambdaGrid& grid,
                              SelectionTrace* trace) {
    const std::size_t q = design.term_count();
    if (grid.points < 2) throw ConfigError("select_lambda: grid needs at least 2 points");

    std::vector<double> grid_log(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        grid_log[static_cast<std::size_t>(i)] =
            grid.log10_min +
            (grid.log10_max - grid.log10_min) * static_cast<double>(i) /
                static_cast<double>(grid.points - 1);
    }

    const double n = static_cast<double>(design.sample_count());
    BestTracker best;
    best.tie_tol = 1e-12 * (design.tss() > 0.0 ? design.tss() / n : 1e-300);

    if (q == 0) {
        Eigen::VectorXd none(0);
        SelectionResult out{none, design.fit(none)};
        return out;
    }

    auto evaluate = [&](const Eigen::VectorXd& lambdas, std::vector<SelectionTrace::Visit>* sink) {
        const double score = design.gcv_at(lambdas);
        if (sink) sink->push_back({lambdas, score});
        best.consider(score, lambdas);
        return score;
    };

    Eigen::VectorXd current = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(q));
    std::vector<int> argmin_idx(q, grid.points / 2);

    // Coordinate descent over the grid.
    int cycle = 0;
    for (; cycle < 10; ++cycle) {
        bool moved = false;
        for (std::size_t term = 0; term < q; ++term) {
            BestTracker term_best;
            term_best.tie_tol = best.tie_tol;
            int term_arg = argmin_idx[term];
            for (int i = 0; i < grid.points; ++i) {
                Eigen::VectorXd cand = current;
                cand(static_cast<Eigen::Index>(term)) =
                    std::pow(10.0, grid_log[static_cast<std::size_t>(i)]);
                const double score =
                    evaluate(cand, trace ? &trace->grid_visits : nullptr);
                if (term_best.consider(score, cand)) term_arg = i;
            }
            if (term_arg != argmin_idx[term]) {
                argmin_idx[term] = term_arg;
                moved = true;
            }
            current(static_cast<Eigen::Index>(term)) =
                std::pow(10.0, grid_log[static_cast<std::size_t>(term_arg)]);
        }
        if (!moved) break;
    }
    if (trace) trace->cycles = cycle + 1;

    // One golden-section pass per term inside the bracketing grid cells.
    constexpr double kInvPhi = 0.6180339887498949;
    for (std::size_t term = 0; term < q; ++term) {
        double a = grid_log[static_cast<std::size_t>(std::max(argmin_idx[term] - 1, 0))];
        double b = grid_log[static_cast<std::size_t>(
            std::min(argmin_idx[term] + 1, grid.points - 1))];
        if (!(b > a)) continue;
        double x1 = b - kInvPhi * (b - a);
        double x2 = a + kInvPhi * (b - a);
        auto eval_at = [&](double lg) {
            Eigen::VectorXd cand = current;
            cand(static_cast<Eigen::Index>(term)) = std::pow(10.0, lg);
            return evaluate(cand, trace ? &trace->refine_visits : nullptr);
        };
        double f1 = eval_at(x1);
        double f2 = eval_at(x2);
        for (int it = 0; it < 40; ++it) {
            if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - kInvPhi * (b - a);
                f1 = eval_at(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + kInvPhi * (b - a);
                f2 = eval_at(x2);
            }
        }
        current(static_cast<Eigen::Index>(term)) =
            best.best_lambdas(static_cast<Eigen::Index>(term));
    }

    SelectionResult out;
    out.lambdas = best.best_lambdas;
    out.fit = design.fit(out.lambdas);
    return out;
}

SelectionResult select_lambda(const Eigen::VectorXd& y, const std::vector<TermData>& terms,
                              const LambdaGrid& grid, SelectionTrace* trace) {
    PenalizedDesign design(y, terms);
    return select_lambda(design, grid, trace);
}

}  // namespace hfseason::gam
