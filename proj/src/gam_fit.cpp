#include <cmath>

#include "hfseason/errors.hpp"
#include "hfseason/gam/fit.hpp"

namespace hfseason::gam {

const TermFit& GamFit::term(const std::string& name) const {
    for (const auto& t : terms) {
        if (t.name == name) return t;
    }
    throw DataError("unknown smooth term '" + name + "'");
}

Eigen::MatrixXd sum_to_zero_transform(const Eigen::MatrixXd& basis) {
    const Eigen::Index k = basis.cols();
    Eigen::VectorXd c = basis.colwise().sum();
    const double norm = c.norm();
    if (norm == 0.0) throw NumericError("sum_to_zero_transform: zero column sums");
    // Householder reflection sending c onto the first axis; the remaining
    // columns span its null space.
    Eigen::VectorXd v = c;
    v(0) += (c(0) >= 0.0 ? norm : -norm);
    const double vtv = v.squaredNorm();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(k, k) - (2.0 / vtv) * (v * v.transpose());
    return H.rightCols(k - 1);
}

PenalizedDesign::PenalizedDesign(Eigen::VectorXd y, std::vector<TermData> terms)
    : y_(std::move(y)) {
    const Eigen::Index n = y_.size();
    if (n == 0) throw NumericError("fit: empty response");

    int p = 1;
    std::vector<Eigen::MatrixXd> constrained_bases;
    for (auto& term : terms) {
        if (term.x.size() != n) throw DataError("fit: covariate/response length mismatch");
        const Eigen::MatrixXd B = term.smooth.basis_at(term.x);
        if (!B.allFinite()) throw NumericError("fit: non-finite basis values");
        Block block;
        block.smooth = std::move(term.smooth);
        const Eigen::MatrixXd Z = sum_to_zero_transform(B);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            Z.transpose() * block.smooth.penalty() * Z);
        if (eig.info() != Eigen::Success) {
            throw NumericError("fit: penalty eigendecomposition failed");
        }
        block.constraint = Z * eig.eigenvectors();
        // Roundoff turns the structural null-space eigenvalues into ~1e-12
        // residue, which a lambda of 1e12 would wrongly re-activate; clamp
        // them back to exact zeros.
        const double cutoff = 1e-9 * eig.eigenvalues().cwiseAbs().maxCoeff();
        block.penalty_eigs =
            (eig.eigenvalues().array() > cutoff).select(eig.eigenvalues(), 0.0);
        block.offset = p;
        block.width = block.smooth.size() - 1;
        p += block.width;
        constrained_bases.push_back(B * block.constraint);
        blocks_.push_back(std::move(block));
    }

    X_.resize(n, p);
    X_.col(0).setOnes();
    for (std::size_t q = 0; q < blocks_.size(); ++q) {
        X_.block(0, blocks_[q].offset, n, blocks_[q].width) = constrained_bases[q];
    }
    XtX_ = X_.transpose() * X_;
    Xty_ = X_.transpose() * y_;
    yty_ = y_.squaredNorm();
    const double mean = y_.mean();
    tss_ = (y_.array() - mean).square().sum();
}

PenalizedDesign::Solution PenalizedDesign::solve(const Eigen::VectorXd& lambdas) const {
    if (static_cast<std::size_t>(lambdas.size()) != blocks_.size()) {
        throw DataError("fit: one lambda per smooth term required");
    }
    for (Eigen::Index q = 0; q < lambdas.size(); ++q) {
        if (!(lambdas(q) >= 0.0)) throw NumericError("fit: lambdas must be non-negative");
    }

    const Eigen::Index p = XtX_.rows();
    Eigen::VectorXd pdiag = Eigen::VectorXd::Zero(p);
    for (std::size_t q = 0; q < blocks_.size(); ++q) {
        pdiag.segment(blocks_[q].offset, blocks_[q].width) =
            lambdas(static_cast<Eigen::Index>(q)) * blocks_[q].penalty_eigs;
    }

    // Column rescale by 1/sqrt(1 + p_ii): penalized directions are damped to
    // unit scale, so the factorization stays accurate for lambdas up to and
    // beyond 1e12 where the raw normal equations are hopeless.
    const Eigen::VectorXd scale = (pdiag.array() + 1.0).sqrt().inverse().matrix();
    Eigen::MatrixXd H = scale.asDiagonal() * XtX_ * scale.asDiagonal();
    H.diagonal() += (pdiag.array() * scale.array().square()).matrix();

    const double base_jitter = 1e-10 * H.trace();
    Eigen::LLT<Eigen::MatrixXd> llt;
    bool ok = false;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        Eigen::MatrixXd Hj = H;
        if (attempt > 0) {
            Hj.diagonal().array() += base_jitter * std::pow(100.0, attempt - 1);
        }
        llt.compute(Hj);
        if (llt.info() == Eigen::Success) {
            ok = true;
            break;
        }
    }
    if (!ok) throw NumericError("fit: unidentifiable model (singular after ridge escalation)");

    Solution sol;
    sol.beta = scale.asDiagonal() * llt.solve((scale.asDiagonal() * Xty_).eval());
    if (!sol.beta.allFinite()) throw NumericError("fit: non-finite solution");
    // (X'X + P)^{-1} = D (D X'X D + D P D)^{-1} D with D = diag(scale).
    sol.inv = scale.asDiagonal() * llt.solve(Eigen::MatrixXd::Identity(p, p)) *
              scale.asDiagonal();

    // RSS and the hat-matrix trace need only p-sized quantities:
    // RSS = y'y - 2 b'X'y + b'(X'X)b,  tr A = tr((X'X+P)^{-1} X'X).
    const double rss =
        yty_ - 2.0 * sol.beta.dot(Xty_) + sol.beta.dot(XtX_ * sol.beta);
    sol.rss = rss > 0.0 ? rss : 0.0;

    const Eigen::MatrixXd MX = sol.inv * XtX_;
    sol.edf_total = MX.trace();
    sol.edf_term.resize(blocks_.size());
    for (std::size_t q = 0; q < blocks_.size(); ++q) {
        double e = 0.0;
        for (int j = 0; j < blocks_[q].width; ++j) {
            e += MX(blocks_[q].offset + j, blocks_[q].offset + j);
        }
        sol.edf_term[q] = e;
    }
    return sol;
}

double PenalizedDesign::gcv_at(const Eigen::VectorXd& lambdas) const {
    const Solution sol = solve(lambdas);
    const double n = static_cast<double>(y_.size());
    const double denom = n - sol.edf_total;
    if (denom <= 0.0) throw NumericError("gcv: oversaturated model (tr A >= n)");
    return n * sol.rss / (denom * denom);
}

GamFit PenalizedDesign::fit(const Eigen::VectorXd& lambdas) const {
    const Solution sol = solve(lambdas);
    const double n = static_cast<double>(y_.size());

    GamFit out;
    out.n = static_cast<std::size_t>(y_.size());
    out.intercept = sol.beta(0);
    out.fitted = X_ * sol.beta;
    out.residuals = y_ - out.fitted;
    out.rss = out.residuals.squaredNorm();
    out.edf_total = sol.edf_total;

    const double denom = n - sol.edf_total;
    if (denom <= 0.0) throw NumericError("gcv: oversaturated model (tr A >= n)");
    out.gcv = n * out.rss / (denom * denom);
    out.sigma2 = out.rss / denom;
    out.r_squared = tss_ > 0.0 ? 1.0 - out.rss / tss_ : 0.0;
    out.coef_covariance = out.sigma2 * sol.inv;

    for (std::size_t q = 0; q < blocks_.size(); ++q) {
        TermFit tf;
        tf.name = blocks_[q].smooth.name();
        tf.smooth = blocks_[q].smooth;
        tf.constraint = blocks_[q].constraint;
        tf.coef = sol.beta.segment(blocks_[q].offset, blocks_[q].width);
        tf.lambda = lambdas(static_cast<Eigen::Index>(q));
        tf.edf = sol.edf_term[q];
        tf.col_offset = blocks_[q].offset;
        out.terms.push_back(std::move(tf));
    }
    return out;
}

GamFit fit_penalized_ls(const Eigen::VectorXd& y, const std::vector<TermData>& terms,
                        const Eigen::VectorXd& lambdas) {
    return PenalizedDesign(y, terms).fit(lambdas);
}

double gcv_score(const GamFit& fit, const Eigen::VectorXd& y) {
    const double n = static_cast<double>(y.size());
    const double denom = n - fit.edf_total;
    if (denom <= 0.0) throw NumericError("gcv: oversaturated model (tr A >= n)");
    const double rss = (y - fit.fitted).squaredNorm();
    return n * rss / (denom * denom);
}

double r_squared(const GamFit& fit, const Eigen::VectorXd& y) {
    const double mean = y.mean();
    const double tss = (y.array() - mean).square().sum();
    if (tss <= 0.0) throw NumericError("r_squared: zero response variance");
    const double rss = (y - fit.fitted).squaredNorm();
    return 1.0 - rss / tss;
}

EffectCurve predict_with_bands(const GamFit& fit, const std::string& term,
                               const Eigen::VectorXd& grid) {
    const TermFit& tf = fit.term(term);
    const Eigen::MatrixXd Bc = tf.smooth.basis_at(grid) * tf.constraint;

    EffectCurve out;
    out.x = grid;
    out.effect = Bc * tf.coef;
    const Eigen::MatrixXd cov =
        fit.coef_covariance.block(tf.col_offset, tf.col_offset, tf.coef.size(), tf.coef.size());
    out.lower.resize(grid.size());
    out.upper.resize(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd row = Bc.row(i);
        double var = row.dot(cov * row);
        if (var < 0.0) var = 0.0;
        const double se = std::sqrt(var);
        out.lower(i) = out.effect(i) - 2.0 * se;
        out.upper(i) = out.effect(i) + 2.0 * se;
    }
    return out;
}

}  // namespace hfseason::gam
