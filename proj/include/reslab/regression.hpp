#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace reslab {

// Least-squares projection onto monomials 1, u, ..., u^degree of the
// standardised regressor u = (x - mean) / sd. A regressor with zero spread
// collapses to the constant basis.
class PolynomialProjector {
public:
    PolynomialProjector(std::span<const double> x, int degree);

    // Fitted values of y at the sample points.
    std::vector<double> project(std::span<const double> y) const;
    Eigen::VectorXd coefficients(std::span<const double> y) const;
    double predict(const Eigen::VectorXd& coefficients, double x) const;

    bool degenerate() const noexcept { return degenerate_; }
    int degree() const noexcept { return degree_; }

private:
    double standardise(double x) const noexcept { return (x - centre_) / scale_; }

    int degree_;
    double centre_ = 0.0;
    double scale_ = 1.0;
    bool degenerate_ = false;
    Eigen::MatrixXd design_;
    Eigen::LDLT<Eigen::MatrixXd> gram_;
};

}  // namespace reslab
