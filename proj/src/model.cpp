#include "dsape/model.hpp"
#include "dsape/rng.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace dsape {

namespace detail {

MatrixXd fd_jacobian(const std::function<VectorXd(const VectorXd&)>& fn, const VectorXd& at, int out_dim) {
    const int n = static_cast<int>(at.size());
    MatrixXd J(out_dim, n);
    for (int j = 0; j < n; ++j) {
        const double step = std::max(1e-6, 1e-6 * std::abs(at[j]));
        VectorXd p = at, m = at;
        p[j] += step;
        m[j] -= step;
        J.col(j) = (fn(p) - fn(m)) / (2.0 * step);
    }
    return J;
}

} // namespace detail

MatrixXd NonlinearModel::jac_f_x(const VectorXd& x, const VectorXd& u, const VectorXd& th) const {
    if (f_x) return f_x(x, u, th);
    return detail::fd_jacobian([&](const VectorXd& v) { return f(v, u, th); }, x, n_x);
}

MatrixXd NonlinearModel::jac_f_theta(const VectorXd& x, const VectorXd& u, const VectorXd& th) const {
    if (n_p == 0) return MatrixXd::Zero(n_x, 0);
    if (f_theta) return f_theta(x, u, th);
    return detail::fd_jacobian([&](const VectorXd& v) { return f(x, u, v); }, th, n_x);
}

MatrixXd NonlinearModel::jac_f_u(const VectorXd& x, const VectorXd& u, const VectorXd& th) const {
    if (n_u == 0) return MatrixXd::Zero(n_x, 0);
    if (f_u) return f_u(x, u, th);
    return detail::fd_jacobian([&](const VectorXd& v) { return f(x, v, th); }, u, n_x);
}

MatrixXd NonlinearModel::jac_h_x(const VectorXd& x, const VectorXd& th) const {
    if (h_x) return h_x(x, th);
    return detail::fd_jacobian([&](const VectorXd& v) { return h(v, th); }, x, n_y);
}

MatrixXd NonlinearModel::jac_h_theta(const VectorXd& x, const VectorXd& th) const {
    if (n_p == 0) return MatrixXd::Zero(n_y, 0);
    if (h_theta) return h_theta(x, th);
    return detail::fd_jacobian([&](const VectorXd& v) { return h(x, v); }, th, n_y);
}

AugmentedModel augment(const NonlinearModel& model) {
    AugmentedModel aug;
    aug.base = model;
    aug.n_aug = model.n_x + model.n_p;
    return aug;
}

VectorXd AugmentedModel::f_aug(const VectorXd& x_aug, const VectorXd& u) const {
    const int nx = base.n_x, np = base.n_p;
    VectorXd out(n_aug);
    out.head(nx) = base.f(x_aug.head(nx), u, x_aug.tail(np));
    out.tail(np) = x_aug.tail(np);
    return out;
}

VectorXd AugmentedModel::h_aug(const VectorXd& x_aug) const {
    return base.h(x_aug.head(base.n_x), x_aug.tail(base.n_p));
}

MatrixXd AugmentedModel::jac_aug_x(const VectorXd& x_aug, const VectorXd& u) const {
    const int nx = base.n_x, np = base.n_p;
    const VectorXd x = x_aug.head(nx), th = x_aug.tail(np);
    MatrixXd A = MatrixXd::Zero(n_aug, n_aug);
    A.topLeftCorner(nx, nx) = base.jac_f_x(x, u, th);
    if (np > 0) {
        A.topRightCorner(nx, np) = base.jac_f_theta(x, u, th);
        A.bottomRightCorner(np, np).setIdentity();
    }
    return A;
}

MatrixXd AugmentedModel::jac_aug_h(const VectorXd& x_aug) const {
    const int nx = base.n_x, np = base.n_p;
    const VectorXd x = x_aug.head(nx), th = x_aug.tail(np);
    MatrixXd C(base.n_y, n_aug);
    C.leftCols(nx) = base.jac_h_x(x, th);
    if (np > 0) C.rightCols(np) = base.jac_h_theta(x, th);
    return C;
}

std::vector<std::string> AugmentedModel::names() const {
    std::vector<std::string> out;
    for (int i = 0; i < base.n_x; ++i)
        out.push_back(i < (int)base.state_names.size() ? base.state_names[i] : "x" + std::to_string(i + 1));
    for (int i = 0; i < base.n_p; ++i)
        out.push_back(i < (int)base.param_names.size() ? base.param_names[i] : "theta" + std::to_string(i + 1));
    return out;
}

LinearizedModel linearize(const AugmentedModel& aug, const VectorXd& x_aug, const VectorXd& u) {
    LinearizedModel lin;
    lin.x_aug = x_aug;
    lin.u = u;
    lin.A = aug.jac_aug_x(x_aug, u);
    const int nx = aug.base.n_x, np = aug.base.n_p;
    lin.B = MatrixXd::Zero(aug.n_aug, aug.base.n_u);
    lin.B.topRows(nx) = aug.base.jac_f_u(x_aug.head(nx), u, x_aug.tail(np));
    lin.C = aug.jac_aug_h(x_aug);

    auto check = [](const MatrixXd& M, const char* name) {
        for (int i = 0; i < M.rows(); ++i)
            for (int j = 0; j < M.cols(); ++j)
                if (!std::isfinite(M(i, j))) {
                    std::ostringstream os;
                    os << "non-finite entry in " << name << " at (" << i << "," << j << ")";
                    throw EvalError(os.str());
                }
    };
    check(lin.A, "A");
    check(lin.B, "B");
    check(lin.C, "C");
    return lin;
}

void NoiseSpec::validate() const {
    if (w_std.size() > 0 && w_std.minCoeff() < 0.0)
        throw std::invalid_argument("NoiseSpec: process noise std must be >= 0");
    if (v_std.size() > 0 && v_std.minCoeff() < 0.0)
        throw std::invalid_argument("NoiseSpec: measurement noise std must be >= 0");
}

Trajectory simulate(const NonlinearModel& model, const VectorXd& x0, const VectorXd& theta,
                    const std::vector<VectorXd>& inputs, const NoiseSpec& noise, double dt) {
    if (inputs.empty()) throw std::invalid_argument("simulate: input sequence is empty");
    noise.validate();

    const Philox gen(noise.seed);
    const int T = static_cast<int>(inputs.size());
    Trajectory traj;
    traj.dt = dt;
    traj.theta = theta;
    traj.x.reserve(T + 1);
    traj.x.push_back(x0);

    // counter layout: process noise uses slots [0, T*n_x), measurement noise follows
    const std::uint64_t v_base = static_cast<std::uint64_t>(T) * model.n_x;

    auto measure = [&](const VectorXd& x, int t) {
        VectorXd yc = model.h(x, theta);
        VectorXd ym = yc;
        if (noise.v_std.size() > 0)
            for (int k = 0; k < model.n_y; ++k)
                ym[k] += noise.v_std[k] * gen.normal(v_base + static_cast<std::uint64_t>(t) * model.n_y + k);
        traj.y_clean.push_back(yc);
        traj.y_meas.push_back(ym);
    };

    measure(x0, 0);
    traj.time.push_back(0.0);
    for (int t = 0; t < T; ++t) {
        VectorXd xn = model.f(traj.x.back(), inputs[t], theta);
        if (noise.w_std.size() > 0)
            for (int k = 0; k < model.n_x; ++k)
                xn[k] += noise.w_std[k] * gen.normal(static_cast<std::uint64_t>(t) * model.n_x + k);
        if (!xn.allFinite()) {
            std::ostringstream os;
            os << "simulate: non-finite state at step " << t + 1;
            throw EvalError(os.str());
        }
        traj.x.push_back(xn);
        traj.u.push_back(inputs[t]);
        traj.time.push_back((t + 1) * dt);
        measure(xn, t + 1);
    }
    return traj;
}

void ensure_builtin_models(); // defined in registry.cpp

namespace {
std::map<std::string, ModelFactory>& registry() {
    static std::map<std::string, ModelFactory> r;
    return r;
}
} // namespace

void register_model(const std::string& id, ModelFactory factory) { registry()[id] = std::move(factory); }

bool has_model(const std::string& id) {
    ensure_builtin_models();
    return registry().count(id) > 0;
}

NonlinearModel make_model(const std::string& id) {
    ensure_builtin_models();
    auto it = registry().find(id);
    if (it == registry().end()) throw std::invalid_argument("unknown model id: " + id);
    return it->second();
}

std::vector<std::string> registered_models() {
    ensure_builtin_models();
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

} // namespace dsape
