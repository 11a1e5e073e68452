#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hfseason/gam/basis.hpp"

namespace hfseason::gam {

/// One smooth term together with its covariate values.
struct TermData {
    Smooth smooth;
    Eigen::VectorXd x;
};

/// Per-term state of a fitted model, in the sum-to-zero-constrained
/// coefficient space (dimension k - 1).
struct TermFit {
    std::string name;
    Smooth smooth;
    Eigen::MatrixXd constraint;  // k x (k-1) orthonormal null-space basis Z
    Eigen::VectorXd coef;        // constrained coefficients
    double lambda = 0.0;
    double edf = 0.0;
    int col_offset = 0;  // first column of this term's block in the design
};

struct GamFit {
    double intercept = 0.0;
    std::vector<TermFit> terms;
    Eigen::VectorXd fitted;
    Eigen::VectorXd residuals;  // y - fitted, exactly
    double rss = 0.0;
    double edf_total = 0.0;
    double gcv = 0.0;
    double r_squared = 0.0;
    double sigma2 = 0.0;                // RSS / (n - edf_total)
    Eigen::MatrixXd coef_covariance;    // sigma2 * (X'X + P)^{-1}, intercept first
    std::size_t n = 0;

    const TermFit& term(const std::string& name) const;  // throws DataError if unknown
};

/// Minimizes ||y - X b||^2 + sum_q lambda_q b_q' S_q b_q over the design
/// X = [1 | B_1 Z_1 | ...] where each smooth is reparameterized so its
/// fitted values sum to zero over the sample. Solved through the normal
/// equations with a Cholesky factorization; on failure an escalating ridge
/// jitter (1e-10 x trace, three escalations) is applied before giving up.
GamFit fit_penalized_ls(const Eigen::VectorXd& y, const std::vector<TermData>& terms,
                        const Eigen::VectorXd& lambdas);

/// GCV = n ||y - yhat||^2 / (n - tr A)^2 with tr A = edf_total.
double gcv_score(const GamFit& fit, const Eigen::VectorXd& y);

/// 1 - RSS/TSS. Throws NumericError when y has zero variance.
double r_squared(const GamFit& fit, const Eigen::VectorXd& y);

struct EffectCurve {
    Eigen::VectorXd x;
    Eigen::VectorXd effect;
    Eigen::VectorXd lower;  // effect - 2 se
    Eigen::VectorXd upper;  // effect + 2 se
};

/// Term effect over a grid with +-2 standard-error bands from the posterior
/// coefficient covariance.
EffectCurve predict_with_bands(const GamFit& fit, const std::string& term,
                               const Eigen::VectorXd& grid);

/// Orthonormal basis of the null space of (column sums of B); B Z has
/// zero column sums, which is the sum-to-zero constraint.
Eigen::MatrixXd sum_to_zero_transform(const Eigen::MatrixXd& basis);

/// Shared assembled design: basis and penalty blocks are computed once so a
/// lambda search only pays for p x p solves.
class PenalizedDesign {
public:
    PenalizedDesign(Eigen::VectorXd y, std::vector<TermData> terms);

    GamFit fit(const Eigen::VectorXd& lambdas) const;
    /// GCV at the given lambdas without materializing fitted values.
    double gcv_at(const Eigen::VectorXd& lambdas) const;

    std::size_t term_count() const { return blocks_.size(); }
    std::size_t sample_count() const { return static_cast<std::size_t>(y_.size()); }
    double tss() const { return tss_; }

private:
    // Each smooth is reparameterized twice at assembly: the sum-to-zero
    // transform Z, then the eigenbasis of Z'SZ so the penalty is diagonal.
    // The diagonal form lets solve() rescale columns by 1/sqrt(1 + p_ii),
    // which keeps the system well-conditioned even at lambda ~ 1e12.
    struct Block {
        Smooth smooth;
        Eigen::MatrixXd constraint;     // Z * U, k x (k-1)
        Eigen::VectorXd penalty_eigs;   // eigenvalues of Z'SZ, >= 0
        int offset = 0;                 // column offset in X
        int width = 0;                  // k - 1
    };
    struct Solution {
        Eigen::VectorXd beta;
        Eigen::MatrixXd inv;  // (X'X + P + jitter I)^{-1}
        double rss = 0.0;
        double edf_total = 0.0;
        std::vector<double> edf_term;
    };
    Solution solve(const Eigen::VectorXd& lambdas) const;

    Eigen::VectorXd y_;
    double yty_ = 0.0;
    double tss_ = 0.0;
    Eigen::MatrixXd X_;
    Eigen::MatrixXd XtX_;
    Eigen::VectorXd Xty_;
    std::vector<Block> blocks_;
};

}  // namespace hfseason::gam
