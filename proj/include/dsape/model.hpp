#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsape {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discrete-time nonlinear model x(t+1) = f(x,u,theta), y = h(x,theta).
/// Analytic Jacobians are optional; central finite differences are used
/// where they are missing (step max(1e-6, 1e-6*|v|) per coordinate).
struct NonlinearModel {
    int n_x = 0;
    int n_u = 0;
    int n_y = 0;
    int n_p = 0;

    std::function<VectorXd(const VectorXd&, const VectorXd&, const VectorXd&)> f;
    std::function<VectorXd(const VectorXd&, const VectorXd&)> h;

    // optional analytic Jacobians
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> f_x;     // n_x x n_x
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> f_theta; // n_x x n_p
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> f_u;     // n_x x n_u
    std::function<MatrixXd(const VectorXd&, const VectorXd&)> h_x;                      // n_y x n_x
    std::function<MatrixXd(const VectorXd&, const VectorXd&)> h_theta;                  // n_y x n_p

    std::vector<std::string> state_names;
    std::vector<std::string> param_names;
    std::vector<std::string> output_names;

    MatrixXd jac_f_x(const VectorXd& x, const VectorXd& u, const VectorXd& th) const;
    MatrixXd jac_f_theta(const VectorXd& x, const VectorXd& u, const VectorXd& th) const;
    MatrixXd jac_f_u(const VectorXd& x, const VectorXd& u, const VectorXd& th) const;
    MatrixXd jac_h_x(const VectorXd& x, const VectorXd& th) const;
    MatrixXd jac_h_theta(const VectorXd& x, const VectorXd& th) const;
};

/// Parameters appended to the state with constant dynamics theta(t+1)=theta(t).
struct AugmentedModel {
    NonlinearModel base;
    int n_aug = 0; // n_x + n_p

    VectorXd f_aug(const VectorXd& x_aug, const VectorXd& u) const;
    VectorXd h_aug(const VectorXd& x_aug) const;

    /// [ df/dx  df/dtheta ; 0  I ]
    MatrixXd jac_aug_x(const VectorXd& x_aug, const VectorXd& u) const;
    /// [ dh/dx  dh/dtheta ]
    MatrixXd jac_aug_h(const VectorXd& x_aug) const;

    std::vector<std::string> names() const;
};

AugmentedModel augment(const NonlinearModel& model);

struct LinearizedModel {
    MatrixXd A; // (n_x+n_p) x (n_x+n_p)
    MatrixXd B; // (n_x+n_p) x n_u
    MatrixXd C; // n_y x (n_x+n_p)
    VectorXd x_aug;
    VectorXd u;
};

/// Jacobians of the augmented system at (x_aug, u); throws EvalError naming
/// the offending entry if any Jacobian value is not finite.
LinearizedModel linearize(const AugmentedModel& aug, const VectorXd& x_aug, const VectorXd& u);

/// Per-channel noise standard deviations plus the seed they are drawn with.
struct NoiseSpec {
    VectorXd w_std; // process noise, length n_x (empty = none)
    VectorXd v_std; // measurement noise, length n_y (empty = none)
    std::uint64_t seed = 0;

    void validate() const;
};

struct Trajectory {
    std::vector<double> time;     // hours
    std::vector<VectorXd> x;      // length T+1
    std::vector<VectorXd> u;      // length T
    std::vector<VectorXd> y_clean;// length T+1
    std::vector<VectorXd> y_meas; // length T+1
    VectorXd theta;
    double dt = 0.0;

    int steps() const { return static_cast<int>(u.size()); }
};

Trajectory simulate(const NonlinearModel& model, const VectorXd& x0, const VectorXd& theta,
                    const std::vector<VectorXd>& inputs, const NoiseSpec& noise, double dt);

// --- model registry -------------------------------------------------------

using ModelFactory = std::function<NonlinearModel()>;

void register_model(const std::string& id, ModelFactory factory);
NonlinearModel make_model(const std::string& id);
bool has_model(const std::string& id);
std::vector<std::string> registered_models();

namespace detail {
MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& fn, const VectorXd& at, int out_dim);
}

} // namespace dsape
