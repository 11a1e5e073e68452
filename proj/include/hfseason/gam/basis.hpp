#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

namespace hfseason::gam {

enum class BasisKind { CubicRegression, PSpline };

/// Basis evaluation plus the matching penalty for one smooth term.
struct DesignBlock {
    Eigen::MatrixXd basis;    // n x k, finite
    Eigen::MatrixXd penalty;  // k x k, symmetric positive semi-definite
    bool constrained = false;
    std::size_t clamped = 0;  // covariate values clamped into the knot range
};

/// Specification of one smooth term: which basis, its dimension and knots,
/// and how roughness is penalized.
///
/// Cubic regression splines parameterize the curve by its values at the
/// knots (a natural interpolating spline in between) and penalize the exact
/// integral of the squared second derivative; their penalty null space is
/// the linear functions. P-splines use a B-spline basis on equally spaced
/// knots with a discrete difference penalty on adjacent coefficients.
/// Cyclic variants wrap both the curve and the penalty around a period.
class Smooth {
public:
    /// An empty placeholder; real instances come from the factories below.
    Smooth() = default;

    /// Natural cubic regression spline on the given strictly increasing
    /// knots (at least 3). Values outside the knot range are clamped.
    static Smooth cubic_regression(std::string name, std::vector<double> knots);

    /// Periodic cubic regression spline; `period` must exceed the knot span
    /// and the curve satisfies f(x) = f(x + period).
    static Smooth cyclic_cubic(std::string name, std::vector<double> knots, double period);

    /// B-spline basis of dimension k on equally spaced knots over
    /// [xmin, xmax] with an order-r difference penalty.
    static Smooth pspline(std::string name, int k, double xmin, double xmax, int degree = 3,
                          int penalty_order = 2, bool cyclic = false);

    DesignBlock design(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd basis_at(const Eigen::VectorXd& x, std::size_t* clamped = nullptr) const;

    const Eigen::MatrixXd& penalty() const { return penalty_; }
    const std::string& name() const { return name_; }
    BasisKind kind() const { return kind_; }
    int size() const { return k_; }  // number of basis coefficients
    bool cyclic() const { return cyclic_; }
    int degree() const { return degree_; }
    int penalty_order() const { return penalty_order_; }
    const std::vector<double>& knots() const { return knots_; }
    double domain_min() const;
    double domain_max() const;

private:
    void build_cubic_penalty();
    void build_pspline_penalty();
    void basis_row_cubic(double x, Eigen::RowVectorXd& row) const;
    void basis_row_pspline(double x, Eigen::RowVectorXd& row) const;

    std::string name_;
    BasisKind kind_ = BasisKind::CubicRegression;
    int k_ = 0;
    std::vector<double> knots_;  // CRS knot sequence; P-spline stores xmin/xmax instead
    double xmin_ = 0.0, xmax_ = 1.0;
    double period_ = 0.0;  // cyclic CRS
    int degree_ = 3;
    int penalty_order_ = 2;
    bool cyclic_ = false;
    Eigen::MatrixXd penalty_;      // S
    Eigen::MatrixXd curvature_map_;  // CRS: maps knot values to knot second derivatives
};

/// Quantile-placed knots (linear-interpolation quantiles of x), deduplicated.
/// Throws NumericError if fewer than 3 distinct knots result.
std::vector<double> quantile_knots(std::span<const double> x, int k);

/// Free-function forms matching the operation contracts.
DesignBlock cubic_regression_basis(const Eigen::VectorXd& x, std::vector<double> knots);
DesignBlock pspline_basis(const Eigen::VectorXd& x, int k, int degree = 3, int penalty_order = 2);

}  // namespace hfseason::gam
