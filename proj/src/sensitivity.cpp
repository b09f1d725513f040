#include "dsape/sensitivity.hpp"

#include <Eigen/SVD>
#include <limits>

namespace dsape {

std::vector<SensitivityState> propagate_param_sensitivity(const NonlinearModel& model,
                                                          const Trajectory& traj) {
    const int T = traj.steps();
    std::vector<SensitivityState> out;
    out.reserve(T + 1);

    MatrixXd Sx = MatrixXd::Zero(model.n_x, model.n_p);
    for (int t = 0; t <= T; ++t) {
        SensitivityState s;
        s.t = t;
        s.S_x_theta = Sx;
        s.S_y_theta = model.jac_h_x(traj.x[t], traj.theta) * Sx + model.jac_h_theta(traj.x[t], traj.theta);
        out.push_back(std::move(s));
        if (t < T) {
            Sx = model.jac_f_x(traj.x[t], traj.u[t], traj.theta) * Sx +
                 model.jac_f_theta(traj.x[t], traj.u[t], traj.theta);
        }
    }
    return out;
}

std::vector<SensitivityState> propagate_initial_state_sensitivity(const NonlinearModel& model,
                                                                  const Trajectory& traj) {
    const int T = traj.steps();
    std::vector<SensitivityState> out;
    out.reserve(T + 1);

    MatrixXd Sx = MatrixXd::Identity(model.n_x, model.n_x);
    for (int t = 0; t <= T; ++t) {
        SensitivityState s;
        s.t = t;
        s.S_x_x0 = Sx;
        s.S_y_x0 = model.jac_h_x(traj.x[t], traj.theta) * Sx;
        out.push_back(std::move(s));
        if (t < T) Sx = model.jac_f_x(traj.x[t], traj.u[t], traj.theta) * Sx;
    }
    return out;
}

SensitivityMatrix build_sensitivity_matrix(const AugmentedModel& aug, const Trajectory& traj,
                                           int t, int window) {
    if (window < 1) throw std::invalid_argument("build_sensitivity_matrix: window must be >= 1");
    if (t < window - 1) throw std::invalid_argument("build_sensitivity_matrix: t < window-1");
    if (t > traj.steps()) throw std::invalid_argument("build_sensitivity_matrix: t beyond trajectory");

    const int ny = aug.base.n_y, na = aug.n_aug;
    SensitivityMatrix sm;
    sm.window = window;
    sm.anchor = t;
    sm.S.resize(window * ny, na);
    sm.column_labels = aug.names();

    VectorXd x_aug(na);
    MatrixXd P = MatrixXd::Identity(na, na);
    const int start = t - window + 1;
    for (int i = start; i <= t; ++i) {
        x_aug.head(aug.base.n_x) = traj.x[i];
        x_aug.tail(aug.base.n_p) = traj.theta;
        sm.S.middleRows((i - start) * ny, ny) = aug.jac_aug_h(x_aug) * P;
        if (i < t) {
            // input at instant i advances the window product to i+1
            P = aug.jac_aug_x(x_aug, traj.u[i]) * P;
        }
    }
    return sm;
}

MatrixXd build_observability_matrix(const AugmentedModel& aug, const Trajectory& traj,
                                    int t, int window) {
    return build_sensitivity_matrix(aug, traj, t, window).S;
}

SensitivityMatrix normalize_sensitivity(const SensitivityMatrix& sm, const VectorXd& column_scales,
                                        const VectorXd& output_scales) {
    if (column_scales.size() != sm.S.cols())
        throw std::invalid_argument("normalize_sensitivity: column scale size mismatch");
    const int ny = static_cast<int>(output_scales.size());
    if (ny == 0 || sm.S.rows() % ny != 0)
        throw std::invalid_argument("normalize_sensitivity: output scale size mismatch");
    if (column_scales.minCoeff() <= 0.0 || output_scales.minCoeff() <= 0.0)
        throw std::invalid_argument("normalize_sensitivity: scales must be strictly positive");

    SensitivityMatrix out = sm;
    out.S = sm.S * column_scales.asDiagonal();
    for (int b = 0; b < sm.S.rows() / ny; ++b)
        for (int k = 0; k < ny; ++k) out.S.row(b * ny + k) /= output_scales[k];
    return out;
}

double default_rank_tol(int rows, int cols) {
    return std::max(rows, cols) * std::numeric_limits<double>::epsilon() * 1e3;
}

ObservabilityReport rank_and_condition(const MatrixXd& S, double rank_tol,
                                       double condition_threshold) {
    if (S.size() == 0) throw std::invalid_argument("rank_and_condition: empty matrix");
    Eigen::JacobiSVD<MatrixXd> svd(S);
    if (svd.info() != Eigen::Success) throw EvalError("rank_and_condition: SVD failed");

    ObservabilityReport rep;
    rep.singular_values = svd.singularValues();
    rep.rank_tol = rank_tol;
    rep.condition_threshold = condition_threshold;
    const double smax = rep.singular_values.size() > 0 ? rep.singular_values[0] : 0.0;
    const double cut = rank_tol * smax;
    for (int i = 0; i < rep.singular_values.size(); ++i)
        if (rep.singular_values[i] > cut) rep.rank = i + 1;
    rep.full_rank = rep.rank == std::min(S.rows(), S.cols());
    if (rep.rank > 0 && rep.singular_values[rep.rank - 1] > 0.0)
        rep.condition = smax / rep.singular_values[rep.rank - 1];
    rep.well_conditioned = rep.full_rank && rep.condition <= condition_threshold;
    return rep;
}

} // namespace dsape
