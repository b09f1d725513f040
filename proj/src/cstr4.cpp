#include "dsape/cstr4.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace dsape {

NonlinearModel rk4_discretize(const VectorField& field, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("rk4_discretize: dt must be positive");
    NonlinearModel m;
    m.n_x = field.n_x;
    m.n_u = field.n_u;
    m.n_p = field.n_p;

    auto g = field.g;
    m.f = [g, dt](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
        const VectorXd k1 = g(x, u, th);
        const VectorXd k2 = g(x + 0.5 * dt * k1, u, th);
        const VectorXd k3 = g(x + 0.5 * dt * k2, u, th);
        const VectorXd k4 = g(x + dt * k3, u, th);
        return (x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).eval();
    };

    if (field.g_x && field.g_theta) {
        auto gx = field.g_x;
        auto gth = field.g_theta;
        const int nx = field.n_x, np = field.n_p;
        // stage points are shared by the x- and theta-Jacobians
        m.f_x = [g, gx, dt, nx](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
            const VectorXd k1 = g(x, u, th);
            const VectorXd x2 = x + 0.5 * dt * k1;
            const VectorXd k2 = g(x2, u, th);
            const VectorXd x3 = x + 0.5 * dt * k2;
            const VectorXd k3 = g(x3, u, th);
            const VectorXd x4 = x + dt * k3;
            const MatrixXd I = MatrixXd::Identity(nx, nx);
            const MatrixXd D1 = gx(x, u, th);
            const MatrixXd D2 = gx(x2, u, th) * (I + 0.5 * dt * D1);
            const MatrixXd D3 = gx(x3, u, th) * (I + 0.5 * dt * D2);
            const MatrixXd D4 = gx(x4, u, th) * (I + dt * D3);
            return (I + dt / 6.0 * (D1 + 2.0 * D2 + 2.0 * D3 + D4)).eval();
        };
        m.f_theta = [g, gx, gth, dt, nx, np](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
            const VectorXd k1 = g(x, u, th);
            const VectorXd x2 = x + 0.5 * dt * k1;
            const VectorXd k2 = g(x2, u, th);
            const VectorXd x3 = x + 0.5 * dt * k2;
            const VectorXd k3 = g(x3, u, th);
            const VectorXd x4 = x + dt * k3;
            const MatrixXd P1 = gth(x, u, th);
            const MatrixXd P2 = gth(x2, u, th) + gx(x2, u, th) * (0.5 * dt * P1);
            const MatrixXd P3 = gth(x3, u, th) + gx(x3, u, th) * (0.5 * dt * P2);
            const MatrixXd P4 = gth(x4, u, th) + gx(x4, u, th) * (dt * P3);
            return (dt / 6.0 * (P1 + 2.0 * P2 + 2.0 * P3 + P4)).eval();
        };
        if (field.g_u) {
            auto gu = field.g_u;
            const int nu = field.n_u;
            m.f_u = [g, gx, gu, dt, nu](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
                const VectorXd k1 = g(x, u, th);
                const VectorXd x2 = x + 0.5 * dt * k1;
                const VectorXd k2 = g(x2, u, th);
                const VectorXd x3 = x + 0.5 * dt * k2;
                const VectorXd k3 = g(x3, u, th);
                const VectorXd x4 = x + dt * k3;
                const MatrixXd U1 = gu(x, u, th);
                const MatrixXd U2 = gu(x2, u, th) + gx(x2, u, th) * (0.5 * dt * U1);
                const MatrixXd U3 = gu(x3, u, th) + gx(x3, u, th) * (0.5 * dt * U2);
                const MatrixXd U4 = gu(x4, u, th) + gx(x4, u, th) * (dt * U3);
                return (dt / 6.0 * (U1 + 2.0 * U2 + 2.0 * U3 + U4)).eval();
            };
        }
    }
    return m;
}

NonlinearModel scale_model(const NonlinearModel& m, const VectorXd& x_scale,
                           const VectorXd& theta_scale, const VectorXd& y_scale) {
    if (x_scale.size() != m.n_x || theta_scale.size() != m.n_p || y_scale.size() != m.n_y)
        throw std::invalid_argument("scale_model: scale dimensions do not match model");
    if ((x_scale.array() <= 0).any() || (m.n_p > 0 && (theta_scale.array() <= 0).any()) ||
        (y_scale.array() <= 0).any())
        throw std::invalid_argument("scale_model: scales must be strictly positive");

    NonlinearModel s = m;
    const VectorXd xs = x_scale, ts = theta_scale, ys = y_scale;
    s.f = [m, xs, ts](const VectorXd& z, const VectorXd& u, const VectorXd& phi) {
        return (m.f(z.cwiseProduct(xs), u, phi.cwiseProduct(ts)).cwiseQuotient(xs)).eval();
    };
    s.h = [m, xs, ts, ys](const VectorXd& z, const VectorXd& phi) {
        return (m.h(z.cwiseProduct(xs), phi.cwiseProduct(ts)).cwiseQuotient(ys)).eval();
    };
    s.f_x = [m, xs, ts](const VectorXd& z, const VectorXd& u, const VectorXd& phi) {
        MatrixXd J = m.jac_f_x(z.cwiseProduct(xs), u, phi.cwiseProduct(ts));
        return (xs.cwiseInverse().asDiagonal() * J * xs.asDiagonal()).eval();
    };
    s.f_theta = [m, xs, ts](const VectorXd& z, const VectorXd& u, const VectorXd& phi) {
        MatrixXd J = m.jac_f_theta(z.cwiseProduct(xs), u, phi.cwiseProduct(ts));
        return (xs.cwiseInverse().asDiagonal() * J * ts.asDiagonal()).eval();
    };
    s.f_u = [m, xs, ts](const VectorXd& z, const VectorXd& u, const VectorXd& phi) {
        MatrixXd J = m.jac_f_u(z.cwiseProduct(xs), u, phi.cwiseProduct(ts));
        return (xs.cwiseInverse().asDiagonal() * J).eval();
    };
    s.h_x = [m, xs, ts, ys](const VectorXd& z, const VectorXd& phi) {
        MatrixXd J = m.jac_h_x(z.cwiseProduct(xs), phi.cwiseProduct(ts));
        return (ys.cwiseInverse().asDiagonal() * J * xs.asDiagonal()).eval();
    };
    s.h_theta = [m, xs, ts, ys](const VectorXd& z, const VectorXd& phi) {
        MatrixXd J = m.jac_h_theta(z.cwiseProduct(xs), phi.cwiseProduct(ts));
        return (ys.cwiseInverse().asDiagonal() * J * ts.asDiagonal()).eval();
    };
    return s;
}

namespace cstr4 {

const char* const kStateNames[kNumStates] = {"C1", "T1", "C2", "T2", "C3", "T3", "C4", "T4"};
const char* const kParamNames[kNumParams] = {"F01", "F02", "F03", "F04", "V1", "V2", "V3", "V4",
                                             "C01", "C02", "C03", "C04", "E1", "E2", "E3",
                                             "F1", "F2", "F3", "Fr1", "Fr2", "R"};

void Params::validate() const {
    if (V1 <= 0 || V2 <= 0 || V3 <= 0 || V4 <= 0) throw std::invalid_argument("cstr4: volumes must be positive");
    if (F01 <= 0 || F02 <= 0 || F03 <= 0 || F04 <= 0) throw std::invalid_argument("cstr4: feed flows must be positive");
    if (cp <= 0 || rho <= 0) throw std::invalid_argument("cstr4: cp and rho must be positive");
}

VectorXd Params::theta() const {
    VectorXd th(kNumParams);
    th << F01, F02, F03, F04, V1, V2, V3, V4, C01, C02, C03, C04, E1, E2, E3, F1, F2, F3, Fr1, Fr2, R;
    return th;
}

Params Params::with_theta(const VectorXd& th) {
    if (th.size() != kNumParams) throw std::invalid_argument("cstr4: theta must have 21 entries");
    Params p;
    p.F01 = th[0]; p.F02 = th[1]; p.F03 = th[2]; p.F04 = th[3];
    p.V1 = th[4]; p.V2 = th[5]; p.V3 = th[6]; p.V4 = th[7];
    p.C01 = th[8]; p.C02 = th[9]; p.C03 = th[10]; p.C04 = th[11];
    p.E1 = th[12]; p.E2 = th[13]; p.E3 = th[14];
    p.F1 = th[15]; p.F2 = th[16]; p.F3 = th[17];
    p.Fr1 = th[18]; p.Fr2 = th[19]; p.R = th[20];
    return p;
}

namespace {

struct Arrhenius {
    double r;      // sum_j k_j exp(-E_j/(R T))
    double rh;     // sum_j dH_j/(rho cp) k_j exp(-E_j/(R T))
    double r_T;    // d r / d T
    double rh_T;
    double rE[3];  // d r / d E_j
    double rhE[3];
    double r_R;    // d r / d R
    double rh_R;
};

Arrhenius arrhenius(double T, const Params& p) {
    if (T <= 0.0) {
        std::ostringstream os;
        os << "cstr4: non-positive temperature " << T << " K in Arrhenius term";
        throw EvalError(os.str());
    }
    const double ks[3] = {p.k1, p.k2, p.k3};
    const double Es[3] = {p.E1, p.E2, p.E3};
    const double hs[3] = {p.dH1 / (p.rho * p.cp), p.dH2 / (p.rho * p.cp), p.dH3 / (p.rho * p.cp)};
    Arrhenius a{};
    for (int j = 0; j < 3; ++j) {
        const double e = ks[j] * std::exp(-Es[j] / (p.R * T));
        a.r += e;
        a.rh += hs[j] * e;
        a.r_T += e * Es[j] / (p.R * T * T);
        a.rh_T += hs[j] * e * Es[j] / (p.R * T * T);
        a.rE[j] = -e / (p.R * T);
        a.rhE[j] = -hs[j] * e / (p.R * T);
        a.r_R += e * Es[j] / (p.R * p.R * T);
        a.rh_R += hs[j] * e * Es[j] / (p.R * p.R * T);
    }
    return a;
}

} // namespace

VectorXd rhs(const VectorXd& x, const VectorXd& u, const Params& p) {
    const double C1 = x[0], T1 = x[1], C2 = x[2], T2 = x[3];
    const double C3 = x[4], T3 = x[5], C4 = x[6], T4 = x[7];
    const double Q1 = u[0], Q2 = u[1], Q3 = u[2], Q4 = u[3];
    const double rc = p.rho * p.cp;

    const Arrhenius a1 = arrhenius(T1, p), a2 = arrhenius(T2, p);
    const Arrhenius a3 = arrhenius(T3, p), a4 = arrhenius(T4, p);

    VectorXd d(kNumStates);
    d[0] = p.F01 / p.V1 * (p.C01 - C1) + p.Fr1 / p.V1 * (C2 - C1) + p.Fr2 / p.V1 * (C4 - C1) - a1.r * C1;
    d[1] = p.F01 / p.V1 * (p.T01 - T1) + p.Fr1 / p.V1 * (T2 - T1) + p.Fr2 / p.V1 * (T4 - T1) - a1.rh * C1 +
           Q1 / (rc * p.V1);
    d[2] = p.F1 / p.V2 * (C1 - C2) + p.F02 / p.V2 * (p.C02 - C2) - a2.r * C2;
    d[3] = p.F1 / p.V2 * (T1 - T2) + p.F02 / p.V2 * (p.T02 - T2) - a2.rh * C2 + Q2 / (rc * p.V2);
    d[4] = (p.F2 - p.Fr1) / p.V3 * (C2 - C3) + p.F03 / p.V3 * (p.C03 - C3) - a3.r * C3;
    d[5] = (p.F2 - p.Fr1) / p.V3 * (T2 - T3) + p.F03 / p.V3 * (p.T03 - T3) - a3.rh * C3 + Q3 / (rc * p.V3);
    d[6] = p.F3 / p.V4 * (C3 - C4) + p.F04 / p.V4 * (p.C04 - C4) - a4.r * C4;
    d[7] = p.F3 / p.V4 * (T3 - T4) + p.F04 / p.V4 * (p.T04 - T4) - a4.rh * C4 + Q4 / (rc * p.V4);
    return d;
}

MatrixXd rhs_jac_x(const VectorXd& x, const VectorXd& u, const Params& p) {
    (void)u;
    const double C1 = x[0], T1 = x[1], C2 = x[2], T2 = x[3];
    const double C3 = x[4], T3 = x[5], C4 = x[6], T4 = x[7];
    const Arrhenius a1 = arrhenius(T1, p), a2 = arrhenius(T2, p);
    const Arrhenius a3 = arrhenius(T3, p), a4 = arrhenius(T4, p);

    MatrixXd J = MatrixXd::Zero(kNumStates, kNumStates);
    // vessel 1
    J(0, 0) = -(p.F01 + p.Fr1 + p.Fr2) / p.V1 - a1.r;
    J(0, 1) = -a1.r_T * C1;
    J(0, 2) = p.Fr1 / p.V1;
    J(0, 6) = p.Fr2 / p.V1;
    J(1, 0) = -a1.rh;
    J(1, 1) = -(p.F01 + p.Fr1 + p.Fr2) / p.V1 - a1.rh_T * C1;
    J(1, 3) = p.Fr1 / p.V1;
    J(1, 7) = p.Fr2 / p.V1;
    // vessel 2
    J(2, 0) = p.F1 / p.V2;
    J(2, 2) = -(p.F1 + p.F02) / p.V2 - a2.r;
    J(2, 3) = -a2.r_T * C2;
    J(3, 1) = p.F1 / p.V2;
    J(3, 2) = -a2.rh;
    J(3, 3) = -(p.F1 + p.F02) / p.V2 - a2.rh_T * C2;
    // vessel 3
    const double f23 = (p.F2 - p.Fr1) / p.V3;
    J(4, 2) = f23;
    J(4, 4) = -f23 - p.F03 / p.V3 - a3.r;
    J(4, 5) = -a3.r_T * C3;
    J(5, 3) = f23;
    J(5, 4) = -a3.rh;
    J(5, 5) = -f23 - p.F03 / p.V3 - a3.rh_T * C3;
    // vessel 4
    J(6, 4) = p.F3 / p.V4;
    J(6, 6) = -(p.F3 + p.F04) / p.V4 - a4.r;
    J(6, 7) = -a4.r_T * C4;
    J(7, 5) = p.F3 / p.V4;
    J(7, 6) = -a4.rh;
    J(7, 7) = -(p.F3 + p.F04) / p.V4 - a4.rh_T * C4;
    return J;
}

MatrixXd rhs_jac_theta(const VectorXd& x, const VectorXd& u, const Params& p) {
    const double C1 = x[0], T1 = x[1], C2 = x[2], T2 = x[3];
    const double C3 = x[4], T3 = x[5], C4 = x[6], T4 = x[7];
    const double Q1 = u[0], Q2 = u[1], Q3 = u[2], Q4 = u[3];
    const double rc = p.rho * p.cp;
    const Arrhenius a1 = arrhenius(T1, p), a2 = arrhenius(T2, p);
    const Arrhenius a3 = arrhenius(T3, p), a4 = arrhenius(T4, p);

    enum { F01, F02, F03, F04, V1, V2, V3, V4, C01, C02, C03, C04, E1, E2, E3, F1, F2, F3, Fr1, Fr2, R };
    MatrixXd J = MatrixXd::Zero(kNumStates, kNumParams);

    // vessel 1 concentration
    J(0, F01) = (p.C01 - C1) / p.V1;
    J(0, V1) = -(p.F01 * (p.C01 - C1) + p.Fr1 * (C2 - C1) + p.Fr2 * (C4 - C1)) / (p.V1 * p.V1);
    J(0, C01) = p.F01 / p.V1;
    J(0, Fr1) = (C2 - C1) / p.V1;
    J(0, Fr2) = (C4 - C1) / p.V1;
    for (int j = 0; j < 3; ++j) J(0, E1 + j) = -C1 * a1.rE[j];
    J(0, R) = -C1 * a1.r_R;
    // vessel 1 temperature
    J(1, F01) = (p.T01 - T1) / p.V1;
    J(1, V1) = -(p.F01 * (p.T01 - T1) + p.Fr1 * (T2 - T1) + p.Fr2 * (T4 - T1) + Q1 / rc) / (p.V1 * p.V1);
    J(1, Fr1) = (T2 - T1) / p.V1;
    J(1, Fr2) = (T4 - T1) / p.V1;
    for (int j = 0; j < 3; ++j) J(1, E1 + j) = -C1 * a1.rhE[j];
    J(1, R) = -C1 * a1.rh_R;
    // vessel 2
    J(2, F1) = (C1 - C2) / p.V2;
    J(2, F02) = (p.C02 - C2) / p.V2;
    J(2, V2) = -(p.F1 * (C1 - C2) + p.F02 * (p.C02 - C2)) / (p.V2 * p.V2);
    J(2, C02) = p.F02 / p.V2;
    for (int j = 0; j < 3; ++j) J(2, E1 + j) = -C2 * a2.rE[j];
    J(2, R) = -C2 * a2.r_R;
    J(3, F1) = (T1 - T2) / p.V2;
    J(3, F02) = (p.T02 - T2) / p.V2;
    J(3, V2) = -(p.F1 * (T1 - T2) + p.F02 * (p.T02 - T2) + Q2 / rc) / (p.V2 * p.V2);
    for (int j = 0; j < 3; ++j) J(3, E1 + j) = -C2 * a2.rhE[j];
    J(3, R) = -C2 * a2.rh_R;
    // vessel 3
    J(4, F2) = (C2 - C3) / p.V3;
    J(4, Fr1) = -(C2 - C3) / p.V3;
    J(4, F03) = (p.C03 - C3) / p.V3;
    J(4, V3) = -((p.F2 - p.Fr1) * (C2 - C3) + p.F03 * (p.C03 - C3)) / (p.V3 * p.V3);
    J(4, C03) = p.F03 / p.V3;
    for (int j = 0; j < 3; ++j) J(4, E1 + j) = -C3 * a3.rE[j];
    J(4, R) = -C3 * a3.r_R;
    J(5, F2) = (T2 - T3) / p.V3;
    J(5, Fr1) = -(T2 - T3) / p.V3;
    J(5, F03) = (p.T03 - T3) / p.V3;
    J(5, V3) = -((p.F2 - p.Fr1) * (T2 - T3) + p.F03 * (p.T03 - T3) + Q3 / rc) / (p.V3 * p.V3);
    for (int j = 0; j < 3; ++j) J(5, E1 + j) = -C3 * a3.rhE[j];
    J(5, R) = -C3 * a3.rh_R;
    // vessel 4
    J(6, F3) = (C3 - C4) / p.V4;
    J(6, F04) = (p.C04 - C4) / p.V4;
    J(6, V4) = -(p.F3 * (C3 - C4) + p.F04 * (p.C04 - C4)) / (p.V4 * p.V4);
    J(6, C04) = p.F04 / p.V4;
    for (int j = 0; j < 3; ++j) J(6, E1 + j) = -C4 * a4.rE[j];
    J(6, R) = -C4 * a4.r_R;
    J(7, F3) = (T3 - T4) / p.V4;
    J(7, F04) = (p.T04 - T4) / p.V4;
    J(7, V4) = -(p.F3 * (T3 - T4) + p.F04 * (p.T04 - T4) + Q4 / rc) / (p.V4 * p.V4);
    for (int j = 0; j < 3; ++j) J(7, E1 + j) = -C4 * a4.rhE[j];
    J(7, R) = -C4 * a4.rh_R;
    return J;
}

MatrixXd rhs_jac_u(const VectorXd& x, const VectorXd& u, const Params& p) {
    (void)x; (void)u;
    const double rc = p.rho * p.cp;
    MatrixXd J = MatrixXd::Zero(kNumStates, kNumInputs);
    J(1, 0) = 1.0 / (rc * p.V1);
    J(3, 1) = 1.0 / (rc * p.V2);
    J(5, 2) = 1.0 / (rc * p.V3);
    J(7, 3) = 1.0 / (rc * p.V4);
    return J;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structure_x() {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> S(kNumStates, kNumStates);
    S.setConstant(false);
    auto vessel = [&](int c, int t) { S(c, c) = S(c, t) = S(t, t) = S(t, c) = true; };
    vessel(0, 1); vessel(2, 3); vessel(4, 5); vessel(6, 7);
    // flows: 1->2, 2->1 (Fr1), 2->3, 3->4, 4->1 (Fr2)
    S(2, 0) = S(3, 1) = true;
    S(0, 2) = S(1, 3) = true;
    S(4, 2) = S(5, 3) = true;
    S(6, 4) = S(7, 5) = true;
    S(0, 6) = S(1, 7) = true;
    return S;
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structure_theta() {
    enum { F01, F02, F03, F04, V1, V2, V3, V4, C01, C02, C03, C04, E1, E2, E3, F1, F2, F3, Fr1, Fr2, R };
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> S(kNumStates, kNumParams);
    S.setConstant(false);
    auto both = [&](int vessel, int param) { S(2 * vessel, param) = S(2 * vessel + 1, param) = true; };
    both(0, F01); both(0, V1); both(0, Fr1); both(0, Fr2);
    both(1, F02); both(1, V2); both(1, F1);
    both(2, F03); both(2, V3); both(2, F2); both(2, Fr1);
    both(3, F04); both(3, V4); both(3, F3);
    S(0, C01) = true; S(2, C02) = true; S(4, C03) = true; S(6, C04) = true;
    for (int v = 0; v < 8; ++v) {
        S(v, E1) = S(v, E2) = S(v, E3) = S(v, R) = true;
    }
    return S;
}

VectorXd steady_state_nominal() {
    VectorXd xs(kNumStates);
    xs << 2.78, 363.0, 2.58, 356.0, 2.6, 355.0, 2.6, 392.0;
    return xs;
}

VectorXd nominal_inputs() {
    VectorXd q(kNumInputs);
    q << 1.0e4, 2.0e4, 2.5e4, 1.0e4;
    return q;
}

VectorXd steady_state_refined() {
    static const VectorXd cached = [] {
        const Params p;
        const VectorXd u = nominal_inputs();
        VectorXd x = steady_state_nominal();
        for (int it = 0; it < 50; ++it) {
            const VectorXd g = rhs(x, u, p);
            if (g.cwiseQuotient(x).norm() < 1e-13) break;
            const MatrixXd J = rhs_jac_x(x, u, p);
            x -= J.fullPivLu().solve(g);
        }
        return x;
    }();
    return cached;
}

namespace {

VectorField field() {
    VectorField f;
    f.n_x = kNumStates;
    f.n_u = kNumInputs;
    f.n_p = kNumParams;
    f.g = [](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
        return rhs(x, u, Params::with_theta(th));
    };
    f.g_x = [](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
        return rhs_jac_x(x, u, Params::with_theta(th));
    };
    f.g_theta = [](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
        return rhs_jac_theta(x, u, Params::with_theta(th));
    };
    f.g_u = [](const VectorXd& x, const VectorXd& u, const VectorXd& th) {
        return rhs_jac_u(x, u, Params::with_theta(th));
    };
    return f;
}

void attach_names_and_outputs(NonlinearModel& m) {
    m.n_y = kNumOutputs;
    // temperatures are measured
    m.h = [](const VectorXd& x, const VectorXd&) {
        VectorXd y(kNumOutputs);
        y << x[1], x[3], x[5], x[7];
        return y;
    };
    m.h_x = [](const VectorXd&, const VectorXd&) {
        MatrixXd C = MatrixXd::Zero(kNumOutputs, kNumStates);
        C(0, 1) = C(1, 3) = C(2, 5) = C(3, 7) = 1.0;
        return C;
    };
    m.h_theta = [](const VectorXd&, const VectorXd&) { return MatrixXd::Zero(kNumOutputs, kNumParams); };
    m.state_names.assign(kStateNames, kStateNames + kNumStates);
    m.param_names.assign(kParamNames, kParamNames + kNumParams);
    m.output_names = {"yT1", "yT2", "yT3", "yT4"};
}

} // namespace

NonlinearModel discretize_rk4(double dt) {
    NonlinearModel m = rk4_discretize(field(), dt);
    attach_names_and_outputs(m);
    return m;
}

NonlinearModel discretize_rk4_normalized(double dt) {
    NonlinearModel raw = discretize_rk4(dt);
    const VectorXd xs = steady_state_refined();
    const VectorXd ts = Params().theta();
    VectorXd ys(kNumOutputs);
    ys << xs[1], xs[3], xs[5], xs[7];
    NonlinearModel s = scale_model(raw, xs, ts, ys);
    s.state_names = raw.state_names;
    s.param_names = raw.param_names;
    s.output_names = raw.output_names;
    return s;
}

} // namespace cstr4
} // namespace dsape
