#pragma once

#include "dsape/model.hpp"

namespace dsape {

/// State of the sensitivity recursions at one sampling instant.
struct SensitivityState {
    int t = 0;
    MatrixXd S_x_theta;  // n_x x n_p, dx(t)/dtheta
    MatrixXd S_x_x0;     // n_x x n_x, dx(t)/dx(0)
    MatrixXd S_y_theta;  // n_y x n_p
    MatrixXd S_y_x0;     // n_y x n_x
};

/// dS_x_theta(t+1) = df/dx(t) S_x_theta(t) + df/dtheta(t), S_x_theta(0) = 0.
std::vector<SensitivityState> propagate_param_sensitivity(const NonlinearModel& model,
                                                          const Trajectory& traj);

/// S_x_x0(t+1) = df/dx(t) S_x_x0(t), S_x_x0(0) = I.
std::vector<SensitivityState> propagate_initial_state_sensitivity(const NonlinearModel& model,
                                                                  const Trajectory& traj);

/// Window-stacked output sensitivities with respect to the augmented state at
/// the window start: rows are C(i) A(i-1)...A(t-N+1), i = t-N+1..t.
struct SensitivityMatrix {
    MatrixXd S;          // (N n_y) x (n_x + n_p)
    int window = 0;      // N
    int anchor = 0;      // t
    std::vector<std::string> column_labels;
};

SensitivityMatrix build_sensitivity_matrix(const AugmentedModel& aug, const Trajectory& traj,
                                           int t, int window);

/// Linearized observability matrix over the same window; identical content to
/// build_sensitivity_matrix (shared kernel).
MatrixXd build_observability_matrix(const AugmentedModel& aug, const Trajectory& traj,
                                    int t, int window);

/// Column j scaled by column_scales[j]; the row block of output k divided by
/// output_scales[k]. Scales must be strictly positive.
SensitivityMatrix normalize_sensitivity(const SensitivityMatrix& S, const VectorXd& column_scales,
                                        const VectorXd& output_scales);

struct ObservabilityReport {
    int rank = 0;
    double condition = 1.0;   // over retained singular values
    VectorXd singular_values;
    bool full_rank = false;
    double rank_tol = 0.0;    // relative threshold actually used
    bool well_conditioned = false;
    double condition_threshold = 1e8;
};

/// Default relative rank tolerance: max(rows, cols) * eps * 1e3.
double default_rank_tol(int rows, int cols);

/// rank = number of singular values > rank_tol * sigma_max.
ObservabilityReport rank_and_condition(const MatrixXd& S, double rank_tol,
                                       double condition_threshold = 1e8);

} // namespace dsape
