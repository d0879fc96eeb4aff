#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace reslab {

enum class GrowthClass { lipschitz, quadratic };

struct DriverFlags {
    bool y_independent = false;
    bool positively_homogeneous = false;
    bool convex_in_y = false;
    bool nondecreasing_in_y = false;
    bool jump_aware = false;
    GrowthClass growth = GrowthClass::lipschitz;
};

// Arguments of g. x is the forward (Markov) state, e.g. the short rate for the
// bond driver; u is the scalar jump surrogate.
struct DriverArgs {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    std::span<const double> z;
    double u = 0.0;
};

class Driver {
public:
    using Fn = std::function<double(const DriverArgs&)>;

    Driver(std::string name, Fn fn, DriverFlags flags)
        : name_(std::move(name)), fn_(std::move(fn)), flags_(flags) {}

    double operator()(const DriverArgs& args) const { return fn_(args); }
    double evaluate(double t, double x, double y, std::span<const double> z, double u = 0.0) const {
        return fn_(DriverArgs{t, x, y, z, u});
    }

    const std::string& name() const noexcept { return name_; }
    const DriverFlags& flags() const noexcept { return flags_; }

private:
    std::string name_;
    Fn fn_;
    DriverFlags flags_;
};

namespace drivers {

Driver zero();
// g = -(mu/sigma) z, Brownian market with market price of risk mu/sigma.
Driver linear_brownian(double mu, double sigma);
// g = -x y where x is the short rate carried as forward state.
Driver bond();
// g = -(r(t) y+ - R(t) y-).
Driver ambiguous_rates(std::function<double(double)> lower, std::function<double(double)> upper);
// g = (gamma/2) |z|^2.
Driver entropic_brownian(double gamma);
// g = (jump_rate/gamma)(exp(gamma u) - gamma u - 1), pure-jump filtration.
Driver entropic_jump(double gamma, double jump_rate);
// g = -(mu/sigma) z on the jump market; jump component does not enter.
Driver jump_market_linear(double mu, double sigma);
// g = kappa y.
Driver linear_in_y(double kappa);
// g = y+.
Driver positive_part();

}  // namespace drivers

struct CatalogParams {
    double mu = 0.10;
    double sigma = 0.10;
    double lower_rate = 0.01;
    double upper_rate = 0.03;
    double gamma = 1.0;
    double jump_rate = 2.0;
};

std::vector<Driver> builtin_drivers(const CatalogParams& params = {});

// Checks the declared flags against evaluations on a pseudo-random probe set.
// Returns the names of the violated flags (empty when consistent).
std::vector<std::string> check_driver_flags(const Driver& driver, unsigned probes = 64);

}  // namespace reslab
