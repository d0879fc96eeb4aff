#include "reslab/regression.hpp"

#include <cmath>
#include <string>

#include "reslab/errors.hpp"

namespace reslab {

PolynomialProjector::PolynomialProjector(std::span<const double> x, int degree) : degree_(degree) {
    if (degree < 0) throw ConfigError("basis degree must be non-negative");
    const auto n = static_cast<Eigen::Index>(x.size());
    if (n == 0) throw OracleError("regression on an empty sample");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    centre_ = mean;
    scale_ = sd;
    degenerate_ = !(sd > 1e-13 * (std::abs(mean) + 1.0));
    if (degenerate_) {
        degree_ = 0;
        scale_ = 1.0;
    }

    const Eigen::Index cols = degree_ + 1;
    if (n < cols) {
        throw OracleError("regression rank deficiency: " + std::to_string(n) +
                          " samples for a degree-" + std::to_string(degree_) +
                          " basis; lower the basis degree");
    }
    design_.resize(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = standardise(x[static_cast<std::size_t>(i)]);
        double p = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            design_(i, j) = p;
            p *= u;
        }
    }
    const Eigen::MatrixXd gram = design_.transpose() * design_;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
        throw OracleError("regression rank deficiency for a degree-" + std::to_string(degree_) +
                          " monomial basis (too few distinct state values); lower the basis degree");
    }
    gram_.compute(gram);
}

Eigen::VectorXd PolynomialProjector::coefficients(std::span<const double> y) const {
    if (static_cast<Eigen::Index>(y.size()) != design_.rows()) {
        throw ConfigError("regression response has the wrong length");
    }
    const Eigen::Map<const Eigen::VectorXd> response(y.data(), design_.rows());
    return gram_.solve(design_.transpose() * response);
}

std::vector<double> PolynomialProjector::project(std::span<const double> y) const {
    const Eigen::VectorXd beta = coefficients(y);
    const Eigen::VectorXd fitted = design_ * beta;
    return {fitted.data(), fitted.data() + fitted.size()};
}

double PolynomialProjector::predict(const Eigen::VectorXd& coefficients, double x) const {
    const double u = standardise(x);
    double value = 0.0;
    for (Eigen::Index j = coefficients.size() - 1; j >= 0; --j) value = value * u + coefficients(j);
    return value;
}

}  // namespace reslab
