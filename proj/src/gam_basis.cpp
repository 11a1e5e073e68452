#include <algorithm>
#include <cmath>

#include "hfseason/errors.hpp"
#include "hfseason/gam/basis.hpp"

namespace hfseason::gam {

namespace {

void check_knots(const std::vector<double>& knots) {
    if (knots.size() < 3) throw NumericError("cubic spline: need at least 3 knots");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (!(knots[i] > knots[i - 1])) {
            throw NumericError("cubic spline: knots must be strictly increasing (duplicate knot?)");
        }
    }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& s) {
    return 0.5 * (s + s.transpose());
}

double binomial(int n, int j) {
    double v = 1.0;
    for (int i = 0; i < j; ++i) v = v * (n - i) / (i + 1);
    return v;
}

// Values of the d+1 B-splines that are nonzero at x, given the local knot
// window t[0..2d+1] with x in [t[d], t[d+1]). Cox-de Boor recursion.
void deboor_local(double x, int degree, const double* t, double* out) {
    out[0] = 1.0;
    std::vector<double> left(static_cast<std::size_t>(degree) + 1);
    std::vector<double> right(static_cast<std::size_t>(degree) + 1);
    for (int q = 1; q <= degree; ++q) {
        left[q] = x - t[degree + 1 - q];
        right[q] = t[degree + q] - x;
        double saved = 0.0;
        for (int r = 0; r < q; ++r) {
            const double denom = right[r + 1] + left[q - r];
            const double temp = denom != 0.0 ? out[r] / denom : 0.0;
            out[r] = saved + right[r + 1] * temp;
            saved = left[q - r] * temp;
        }
        out[q] = saved;
    }
}

}  // namespace

Smooth Smooth::cubic_regression(std::string name, std::vector<double> knots) {
    check_knots(knots);
    Smooth s;
    s.name_ = std::move(name);
    s.kind_ = BasisKind::CubicRegression;
    s.knots_ = std::move(knots);
    s.k_ = static_cast<int>(s.knots_.size());
    s.xmin_ = s.knots_.front();
    s.xmax_ = s.knots_.back();
    s.build_cubic_penalty();
    return s;
}

Smooth Smooth::cyclic_cubic(std::string name, std::vector<double> knots, double period) {
    check_knots(knots);
    if (!(period > knots.back() - knots.front())) {
        throw NumericError("cyclic cubic spline: period must exceed the knot span");
    }
    Smooth s;
    s.name_ = std::move(name);
    s.kind_ = BasisKind::CubicRegression;
    s.cyclic_ = true;
    s.knots_ = std::move(knots);
    s.period_ = period;
    s.k_ = static_cast<int>(s.knots_.size());
    s.xmin_ = s.knots_.front();
    s.xmax_ = s.knots_.front() + period;
    s.build_cubic_penalty();
    return s;
}

Smooth Smooth::pspline(std::string name, int k, double xmin, double xmax, int degree,
                       int penalty_order, bool cyclic) {
    if (degree < 1) throw NumericError("pspline: degree must be >= 1");
    if (k <= degree + 1) throw NumericError("pspline: basis dimension must exceed degree + 1");
    if (penalty_order < 1 || penalty_order >= k) {
        throw NumericError("pspline: penalty order must be in [1, k)");
    }
    if (!(xmax > xmin)) throw NumericError("pspline: empty covariate range");
    Smooth s;
    s.name_ = std::move(name);
    s.kind_ = BasisKind::PSpline;
    s.k_ = k;
    s.xmin_ = xmin;
    s.xmax_ = xmax;
    s.degree_ = degree;
    s.penalty_order_ = penalty_order;
    s.cyclic_ = cyclic;
    s.build_pspline_penalty();
    return s;
}

double Smooth::domain_min() const { return xmin_; }
double Smooth::domain_max() const { return xmax_; }

// Natural / periodic cubic spline machinery. The curve is parameterized by
// its values beta at the knots; the knot second derivatives delta solve the
// tridiagonal continuity system  Bm delta = D beta,  and the roughness
// integral of f''^2 is exactly  beta' D' Bm^{-1} D beta.
void Smooth::build_cubic_penalty() {
    const int k = k_;
    const auto& kn = knots_;

    if (!cyclic_) {
        std::vector<double> h(static_cast<std::size_t>(k) - 1);
        for (int j = 0; j + 1 < k; ++j) h[j] = kn[j + 1] - kn[j];

        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k - 2, k);
        Eigen::MatrixXd Bm = Eigen::MatrixXd::Zero(k - 2, k - 2);
        for (int i = 0; i < k - 2; ++i) {
            D(i, i) = 1.0 / h[i];
            D(i, i + 1) = -1.0 / h[i] - 1.0 / h[i + 1];
            D(i, i + 2) = 1.0 / h[i + 1];
            Bm(i, i) = (h[i] + h[i + 1]) / 3.0;
            if (i + 1 < k - 2) {
                Bm(i, i + 1) = h[i + 1] / 6.0;
                Bm(i + 1, i) = h[i + 1] / 6.0;
            }
        }
        const Eigen::MatrixXd F = Bm.ldlt().solve(D);  // (k-2) x k
        curvature_map_ = Eigen::MatrixXd::Zero(k, k);
        curvature_map_.block(1, 0, k - 2, k) = F;  // natural ends: zero curvature
        penalty_ = symmetrized(D.transpose() * F);
        return;
    }

    // Cyclic: all k knots carry free curvature; indices wrap.
    std::vector<double> h(static_cast<std::size_t>(k));
    for (int j = 0; j + 1 < k; ++j) h[j] = kn[j + 1] - kn[j];
    h[k - 1] = kn[0] + period_ - kn[k - 1];

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd Bm = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        const int prev = (j + k - 1) % k;
        const int next = (j + 1) % k;
        D(j, prev) += 1.0 / h[prev];
        D(j, j) += -1.0 / h[prev] - 1.0 / h[j];
        D(j, next) += 1.0 / h[j];
        Bm(j, j) += (h[prev] + h[j]) / 3.0;
        Bm(j, next) += h[j] / 6.0;
        Bm(j, prev) += h[prev] / 6.0;
    }
    curvature_map_ = Bm.ldlt().solve(D);
    penalty_ = symmetrized(D.transpose() * curvature_map_);
}

void Smooth::build_pspline_penalty() {
    const int k = k_;
    const int r = penalty_order_;
    std::vector<double> coeff(static_cast<std::size_t>(r) + 1);
    for (int j = 0; j <= r; ++j) {
        coeff[j] = ((r - j) % 2 == 0 ? 1.0 : -1.0) * binomial(r, j);
    }
    Eigen::MatrixXd D;
    if (!cyclic_) {
        D = Eigen::MatrixXd::Zero(k - r, k);
        for (int i = 0; i < k - r; ++i) {
            for (int j = 0; j <= r; ++j) D(i, i + j) = coeff[j];
        }
    } else {
        D = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j <= r; ++j) D(i, (i + j) % k) += coeff[j];
        }
    }
    penalty_ = symmetrized(D.transpose() * D);
}

void Smooth::basis_row_cubic(double x, Eigen::RowVectorXd& row) const {
    const int k = k_;
    const auto& kn = knots_;
    int j;
    double next_knot;
    if (cyclic_) {
        // Map into [kn[0], kn[0] + period).
        double u = std::fmod(x - kn[0], period_);
        if (u < 0) u += period_;
        x = kn[0] + u;
        j = static_cast<int>(std::upper_bound(kn.begin(), kn.end(), x) - kn.begin()) - 1;
        if (j < 0) j = 0;
        if (j > k - 1) j = k - 1;
        next_knot = j == k - 1 ? kn[0] + period_ : kn[j + 1];
    } else {
        j = static_cast<int>(std::upper_bound(kn.begin(), kn.end(), x) - kn.begin()) - 1;
        if (j < 0) j = 0;
        if (j > k - 2) j = k - 2;
        next_knot = kn[j + 1];
    }
    const int jn = cyclic_ ? (j + 1) % k : j + 1;
    const double hj = next_knot - kn[j];
    const double dl = next_knot - x;  // distance to the right knot
    const double dr = x - kn[j];      // distance to the left knot
    const double am = dl / hj;
    const double ap = dr / hj;
    const double cm = (dl * dl * dl / hj - hj * dl) / 6.0;
    const double cp = (dr * dr * dr / hj - hj * dr) / 6.0;

    row.setZero();
    row(j) += am;
    row(jn) += ap;
    row += cm * curvature_map_.row(j);
    row += cp * curvature_map_.row(jn);
}

void Smooth::basis_row_pspline(double x, Eigen::RowVectorXd& row) const {
    const int k = k_;
    const int d = degree_;
    row.setZero();
    std::vector<double> vals(static_cast<std::size_t>(d) + 1);
    std::vector<double> t(2 * static_cast<std::size_t>(d) + 2);

    if (!cyclic_) {
        const double h = (xmax_ - xmin_) / static_cast<double>(k - d);
        // Span index m in the full knot vector t_i = xmin + (i - d) h.
        int m = d + static_cast<int>(std::floor((x - xmin_) / h));
        m = std::clamp(m, d, k - 1);
        for (int i = 0; i <= 2 * d + 1; ++i) {
            t[static_cast<std::size_t>(i)] = xmin_ + static_cast<double>(m - 2 * d + i) * h;
        }
        deboor_local(x, d, t.data(), vals.data());
        for (int r = 0; r <= d; ++r) row(m - d + r) = vals[static_cast<std::size_t>(r)];
        return;
    }

    // Cyclic: k equal spans per period; infinite uniform knots folded mod k.
    const double h = (xmax_ - xmin_) / static_cast<double>(k);
    double u = std::fmod(x - xmin_, xmax_ - xmin_);
    if (u < 0) u += xmax_ - xmin_;
    const double xx = xmin_ + u;
    int m = static_cast<int>(std::floor(u / h));
    m = std::clamp(m, 0, k - 1);
    for (int i = 0; i <= 2 * d + 1; ++i) {
        t[static_cast<std::size_t>(i)] = xmin_ + static_cast<double>(m - d + i) * h;
    }
    deboor_local(xx, d, t.data(), vals.data());
    for (int r = 0; r <= d; ++r) {
        const int idx = ((m - d + r) % k + k) % k;
        row(idx) += vals[static_cast<std::size_t>(r)];
    }
}

Eigen::MatrixXd Smooth::basis_at(const Eigen::VectorXd& x, std::size_t* clamped) const {
    Eigen::MatrixXd B(x.size(), k_);
    Eigen::RowVectorXd row(k_);
    std::size_t clamp_count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double xi = x(i);
        if (!std::isfinite(xi)) throw NumericError("basis: non-finite covariate value");
        if (!cyclic_ && (xi < xmin_ || xi > xmax_)) {
            xi = std::clamp(xi, xmin_, xmax_);
            ++clamp_count;
        }
        if (kind_ == BasisKind::CubicRegression) {
            basis_row_cubic(xi, row);
        } else {
            basis_row_pspline(xi, row);
        }
        B.row(i) = row;
    }
    if (clamped) *clamped = clamp_count;
    return B;
}

DesignBlock Smooth::design(const Eigen::VectorXd& x) const {
    DesignBlock block;
    block.basis = basis_at(x, &block.clamped);
    block.penalty = penalty_;
    return block;
}

std::vector<double> quantile_knots(std::span<const double> x, int k) {
    if (x.empty()) throw NumericError("quantile_knots: empty covariate");
    if (k < 3) throw NumericError("quantile_knots: need at least 3 knots");
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> knots;
    knots.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(k - 1);
        const double hpos = p * (static_cast<double>(sorted.size()) - 1.0);
        const std::size_t lo = static_cast<std::size_t>(std::floor(hpos));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = hpos - std::floor(hpos);
        knots.push_back(sorted[lo] * (1.0 - frac) + sorted[hi] * frac);
    }
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    if (knots.size() < 3) throw NumericError("quantile_knots: fewer than 3 distinct knots");
    return knots;
}

DesignBlock cubic_regression_basis(const Eigen::VectorXd& x, std::vector<double> knots) {
    return Smooth::cubic_regression("s(x)", std::move(knots)).design(x);
}

DesignBlock pspline_basis(const Eigen::VectorXd& x, int k, int degree, int penalty_order) {
    if (x.size() == 0) throw NumericError("pspline_basis: empty covariate");
    const double xmin = x.minCoeff();
    const double xmax = x.maxCoeff();
    return Smooth::pspline("s(x)", k, xmin, xmax, degree, penalty_order).design(x);
}

}  // namespace hfseason::gam
