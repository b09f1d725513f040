#pragma once

#include "dsape/model.hpp"

namespace dsape {
namespace cstr4 {

/// Four interconnected CSTRs: 8 states (C_Ai, T_i per vessel), heat inputs
/// Q1..Q4, three parallel reactions with Arrhenius kinetics, recycle streams
/// Fr1 (vessel 2 -> 1) and Fr2 (vessel 4 -> 1).
struct Params {
    // unknown parameter vector theta, in this order
    double F01 = 5.0, F02 = 10.0, F03 = 8.0, F04 = 12.0;   // feed flows, m^3/h
    double V1 = 1.0, V2 = 3.0, V3 = 4.0, V4 = 6.0;         // holdup volumes, m^3
    double C01 = 4.0, C02 = 2.0, C03 = 3.0, C04 = 3.5;     // feed concentrations, kmol/m^3
    double E1 = 5.0e4, E2 = 7.5e4, E3 = 7.53e4;            // activation energies, kJ/kmol
    double F1 = 35.0, F2 = 45.0, F3 = 33.0;                // effluent flows, m^3/h
    double Fr1 = 20.0, Fr2 = 10.0;                          // recycle flows, m^3/h
    double R = 8.314;                                       // kJ/(kmol K)

    // known constants
    double T01 = 300.0, T02 = 300.0, T03 = 300.0, T04 = 300.0; // feed temperatures, K
    double dH1 = -5.0e4, dH2 = -5.2e4, dH3 = -5.0e4;           // reaction enthalpies, kJ/kmol
    double k1 = 3.0e6, k2 = 3.0e5, k3 = 3.0e5;                 // pre-exponentials, 1/h
    double cp = 0.231;                                          // kJ/(kg K)
    double rho = 1000.0;                                        // kg/m^3

    void validate() const;
    VectorXd theta() const;
    static Params with_theta(const VectorXd& th);
};

constexpr int kNumStates = 8;
constexpr int kNumParams = 21;
constexpr int kNumInputs = 4;
constexpr int kNumOutputs = 4;
constexpr double kDefaultDt = 1.0 / 120.0; // hours

extern const char* const kStateNames[kNumStates];
extern const char* const kParamNames[kNumParams];

/// Time derivative of the eight states. Throws EvalError on non-positive
/// temperatures (Arrhenius terms undefined).
VectorXd rhs(const VectorXd& x, const VectorXd& u, const Params& p);

MatrixXd rhs_jac_x(const VectorXd& x, const VectorXd& u, const Params& p);
MatrixXd rhs_jac_theta(const VectorXd& x, const VectorXd& u, const Params& p);
MatrixXd rhs_jac_u(const VectorXd& x, const VectorXd& u, const Params& p);

/// Structural sparsity of the continuous-time vector field: which state /
/// parameter enters which equation, independent of evaluation point.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structure_x();
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structure_theta();

/// Steady state printed in the source material (3 significant digits).
VectorXd steady_state_nominal();
/// Newton-polished root of rhs(x, Q_nominal, theta_nominal) seeded at the
/// nominal point; used wherever a consistent equilibrium matters.
VectorXd steady_state_refined();
VectorXd nominal_inputs();

/// RK4 one-step discretization of an arbitrary smooth vector field.
/// Jacobians of the step map are propagated through the stages by the chain
/// rule from the rhs Jacobians.
NonlinearModel discretize_rk4(double dt);

/// Same map expressed in relative coordinates (states, parameters and
/// outputs divided by their steady/nominal scales).
NonlinearModel discretize_rk4_normalized(double dt);

} // namespace cstr4

/// Generic RK4 discretizer used by the cstr4 builders: vector field plus its
/// Jacobians -> discrete NonlinearModel.
struct VectorField {
    int n_x = 0, n_u = 0, n_p = 0;
    std::function<VectorXd(const VectorXd&, const VectorXd&, const VectorXd&)> g;
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> g_x;
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> g_theta;
    std::function<MatrixXd(const VectorXd&, const VectorXd&, const VectorXd&)> g_u;
};

NonlinearModel rk4_discretize(const VectorField& field, double dt);

/// Rescale a model to z = x / x_scale, phi = theta / theta_scale,
/// y = y / y_scale coordinates (all scales strictly positive).
NonlinearModel scale_model(const NonlinearModel& m, const VectorXd& x_scale,
                           const VectorXd& theta_scale, const VectorXd& y_scale);

} // namespace dsape
