#include "dsape/graph.hpp"
#include "dsape/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dsape {

void DirectedGraph::finalize() {
    A.diagonal().setZero();
    m = A.sum();
    k_in = A.rowwise().sum();
    k_out = A.colwise().sum();
}

Partition Partition::from_labels(std::vector<int> labels) {
    std::map<int, int> remap;
    for (int l : labels)
        if (!remap.count(l)) {
            const int next = static_cast<int>(remap.size());
            remap[l] = next;
        }
    Partition p;
    p.community.reserve(labels.size());
    for (int l : labels) p.community.push_back(remap[l]);
    p.n_communities = static_cast<int>(remap.size());
    return p;
}

Partition Partition::singletons(int n) {
    Partition p;
    p.community.resize(n);
    std::iota(p.community.begin(), p.community.end(), 0);
    p.n_communities = n;
    return p;
}

Partition Partition::single(int n) {
    Partition p;
    p.community.assign(n, 0);
    p.n_communities = n > 0 ? 1 : 0;
    return p;
}

DirectedGraph build_graph(const NonlinearModel& model, const SelectionResult& selected,
                          const VectorXd& x_eq, const VectorXd& theta_eq, const VectorXd& u_eq,
                          const GraphBuildOptions& opts) {
    const int nx = model.n_x, np = model.n_p, ny = model.n_y;

    // split the selection into state and parameter nodes, preserving model order
    std::vector<int> sel_states, sel_params;
    {
        std::vector<char> chosen(nx + np, 0);
        for (int c : selected.selected) chosen.at(c) = 1;
        for (int i = 0; i < nx; ++i)
            if (chosen[i]) sel_states.push_back(i);
        for (int p = 0; p < np; ++p)
            if (chosen[nx + p]) sel_params.push_back(p);
    }

    DirectedGraph g;
    for (int i : sel_states)
        g.nodes.push_back({NodeKind::State, i,
                           i < (int)model.state_names.size() ? model.state_names[i] : "x" + std::to_string(i + 1)});
    for (int p : sel_params)
        g.nodes.push_back({NodeKind::Parameter, p,
                           p < (int)model.param_names.size() ? model.param_names[p] : "theta" + std::to_string(p + 1)});
    for (int j = 0; j < ny; ++j)
        g.nodes.push_back({NodeKind::Output, j,
                           j < (int)model.output_names.size() ? model.output_names[j] : "y" + std::to_string(j + 1)});

    const int n = g.size();
    g.A = MatrixXd::Zero(n, n);

    MatrixXd Ax, Bth, Cx, Dth;
    if (opts.use_structural) {
        Ax = opts.structural_x.cast<double>();
        Bth = opts.structural_theta.cast<double>();
        // output maps are cheap to evaluate; use the numeric Jacobians
        Cx = model.jac_h_x(x_eq, theta_eq);
        Dth = model.jac_h_theta(x_eq, theta_eq);
    } else {
        Ax = model.jac_f_x(x_eq, u_eq, theta_eq);
        Bth = model.jac_f_theta(x_eq, u_eq, theta_eq);
        Cx = model.jac_h_x(x_eq, theta_eq);
        Dth = model.jac_h_theta(x_eq, theta_eq);
    }
    const VectorXd y_eq_raw = model.h(x_eq, theta_eq).cwiseAbs();

    auto xscale = [&](int i) { return std::max(std::abs(x_eq[i]), 1e-30); };
    auto pscale = [&](int p) { return std::max(std::abs(theta_eq[p]), 1e-30); };
    auto yscale = [&](int j) { return std::max(y_eq_raw[j], 1e-30); };

    const double thr = opts.sparsity_threshold;
    const int ns = static_cast<int>(sel_states.size());
    const int nsp = static_cast<int>(sel_params.size());

    // state -> state edges
    for (int a = 0; a < ns; ++a)
        for (int b = 0; b < ns; ++b) {
            if (a == b) continue;
            const int k = sel_states[a], i = sel_states[b];
            const double v = opts.use_structural ? Ax(k, i) : std::abs(Ax(k, i)) * xscale(i) / xscale(k);
            if (v > thr) g.A(a, b) = 1.0; // edge x_i -> x_k
        }
    // parameter -> state edges
    for (int a = 0; a < ns; ++a)
        for (int b = 0; b < nsp; ++b) {
            const int k = sel_states[a], p = sel_params[b];
            const double v = opts.use_structural ? Bth(k, p) : std::abs(Bth(k, p)) * pscale(p) / xscale(k);
            if (v > thr) g.A(a, ns + b) = 1.0;
        }
    // state -> output edges
    for (int j = 0; j < ny; ++j)
        for (int b = 0; b < ns; ++b) {
            const int i = sel_states[b];
            const double v = std::abs(Cx(j, i)) * xscale(i) / yscale(j);
            if (v > thr) g.A(ns + nsp + j, b) = 1.0;
        }
    // parameter -> output edges
    for (int j = 0; j < ny; ++j)
        for (int b = 0; b < nsp; ++b) {
            const int p = sel_params[b];
            const double v = std::abs(Dth(j, p)) * pscale(p) / yscale(j);
            if (v > thr) g.A(ns + nsp + j, ns + b) = 1.0;
        }

    g.finalize();
    return g;
}

double modularity(const DirectedGraph& graph, const Partition& partition) {
    const int n = graph.size();
    if ((int)partition.community.size() != n)
        throw std::invalid_argument("modularity: partition does not cover the graph");
    if (graph.m <= 0.0) throw std::invalid_argument("modularity: graph has no edges (m = 0)");

    const int nc = partition.n_communities;
    VectorXd in_c = VectorXd::Zero(nc), out_c = VectorXd::Zero(nc);
    double intra = 0.0;
    for (int i = 0; i < n; ++i) {
        in_c[partition.community[i]] += graph.k_in[i];
        out_c[partition.community[i]] += graph.k_out[i];
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (partition.community[i] == partition.community[j]) intra += graph.A(i, j);
    return (intra - in_c.dot(out_c) / graph.m) / graph.m;
}

namespace {

struct LevelGraph {
    MatrixXd W;   // weighted adjacency with self-loops (aggregated intra weight)
    VectorXd kin, kout;
    double m = 0.0;
};

LevelGraph to_level(const MatrixXd& A) {
    LevelGraph lg;
    lg.W = A;
    lg.kin = A.rowwise().sum();
    lg.kout = A.colwise().sum();
    lg.m = A.sum();
    return lg;
}

// one phase of best-improvement local moves; returns true if anything moved
bool local_moves(const LevelGraph& lg, std::vector<int>& comm, const std::vector<int>& order) {
    const int n = static_cast<int>(comm.size());
    std::vector<double> In(n, 0.0), Out(n, 0.0); // per community degree mass
    for (int i = 0; i < n; ++i) {
        In[comm[i]] += lg.kin[i];
        Out[comm[i]] += lg.kout[i];
    }
    bool any = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int idx = 0; idx < n; ++idx) {
            const int i = order[idx];
            const int ci = comm[i];
            // links to each candidate community (excluding i itself)
            std::map<int, double> link;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double w = lg.W(i, j) + lg.W(j, i);
                if (w != 0.0) link[comm[j]] += w;
            }
            link.emplace(ci, 0.0);
            // detach i
            In[ci] -= lg.kin[i];
            Out[ci] -= lg.kout[i];
            const double base = link.count(ci) ? link[ci] : 0.0;
            double best_gain = 1e-15; // only strictly positive gains move a node
            int best_c = ci;
            for (const auto& [c, w] : link) {
                if (c == ci) continue;
                const double gain = (w - base) -
                                    (lg.kin[i] * (Out[c] - Out[ci]) + lg.kout[i] * (In[c] - In[ci])) / lg.m;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            In[best_c] += lg.kin[i];
            Out[best_c] += lg.kout[i];
            if (best_c != ci) {
                comm[i] = best_c;
                moved = true;
                any = true;
            }
        }
    }
    return any;
}

MatrixXd aggregate(const MatrixXd& W, const std::vector<int>& comm, int nc) {
    MatrixXd W2 = MatrixXd::Zero(nc, nc);
    const int n = static_cast<int>(comm.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (W(i, j) != 0.0) W2(comm[i], comm[j]) += W(i, j);
    return W2;
}

void record_candidate(std::vector<std::pair<double, Partition>>& cands, double omega,
                      const Partition& p) {
    for (const auto& [o, q] : cands)
        if (q.community == p.community) return;
    cands.emplace_back(omega, p);
    std::sort(cands.begin(), cands.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    if (cands.size() > 5) cands.resize(5);
}

} // namespace

LouvainResult louvain(const DirectedGraph& graph, const std::vector<int>& node_order) {
    const int n = graph.size();
    if (graph.m <= 0.0) throw std::invalid_argument("louvain: graph has no edges");

    std::vector<int> flat(n);
    std::iota(flat.begin(), flat.end(), 0);

    LouvainResult result;
    LevelGraph lg = to_level(graph.A);

    std::vector<int> order0 = node_order;
    if (order0.empty()) {
        order0.resize(n);
        std::iota(order0.begin(), order0.end(), 0);
    }

    bool first_level = true;
    while (true) {
        const int nl = static_cast<int>(lg.W.rows());
        std::vector<int> comm(nl);
        std::iota(comm.begin(), comm.end(), 0);
        std::vector<int> order;
        if (first_level) {
            order = order0;
        } else {
            order.resize(nl);
            std::iota(order.begin(), order.end(), 0);
        }
        const bool improved = local_moves(lg, comm, order);
        first_level = false;

        Partition level = Partition::from_labels(comm);
        // map to original nodes
        std::vector<int> newflat(n);
        for (int v = 0; v < n; ++v) newflat[v] = level.community[flat[v]];
        flat = newflat;

        Partition flat_part = Partition::from_labels(flat);
        const double omega = modularity(graph, flat_part);
        record_candidate(result.candidates, omega, flat_part);

        if (!improved) {
            result.partition = flat_part;
            result.omega = omega;
            break;
        }
        lg = to_level(aggregate(lg.W, level.community, level.n_communities));
        if ((int)lg.W.rows() == nl) {
            result.partition = flat_part;
            result.omega = omega;
            break;
        }
    }
    return result;
}

std::pair<Partition, double> enumerate_partitions_bruteforce(const DirectedGraph& graph) {
    const int n = graph.size();
    if (n > 12) throw std::invalid_argument("enumerate_partitions_bruteforce: refuses n > 12");
    if (n == 0) throw std::invalid_argument("enumerate_partitions_bruteforce: empty graph");

    // iterate restricted growth strings
    std::vector<int> a(n, 0), bmax(n, 0);
    Partition best;
    double best_omega = -std::numeric_limits<double>::infinity();
    while (true) {
        Partition p = Partition::from_labels(a);
        const double omega = modularity(graph, p);
        if (omega > best_omega) {
            best_omega = omega;
            best = p;
        }
        // next restricted growth string
        int i = n - 1;
        for (; i > 0; --i) {
            if (a[i] <= bmax[i - 1]) break;
        }
        if (i == 0) break;
        a[i] += 1;
        bmax[i] = std::max(bmax[i - 1], a[i]);
        for (int j = i + 1; j < n; ++j) {
            a[j] = 0;
            bmax[j] = bmax[i];
        }
    }
    return {best, best_omega};
}

std::vector<SubsystemSpec> extract_subsystems(const DirectedGraph& graph, const Partition& partition,
                                              const NonlinearModel& model,
                                              const VectorXd& x_eq, const VectorXd& theta_eq,
                                              const VectorXd& u_eq, double input_threshold) {
    const int n = graph.size();
    if ((int)partition.community.size() != n)
        throw std::invalid_argument("extract_subsystems: partition does not cover the graph");

    const int nc = partition.n_communities;
    std::vector<SubsystemSpec> specs(nc);
    for (int c = 0; c < nc; ++c) specs[c].id = c;

    std::vector<int> node_of_state(model.n_x, -1); // graph node index per model state
    for (int v = 0; v < n; ++v) {
        const auto& node = graph.nodes[v];
        auto& s = specs[partition.community[v]];
        switch (node.kind) {
            case NodeKind::State:
                s.state_indices.push_back(node.source_index);
                node_of_state[node.source_index] = v;
                break;
            case NodeKind::Parameter: s.param_indices.push_back(node.source_index); break;
            case NodeKind::Output: s.output_indices.push_back(node.source_index); break;
        }
    }
    for (auto& s : specs)
        if (!s.output_indices.empty() && s.state_indices.empty())
            throw std::invalid_argument("extract_subsystems: community has outputs but no states");

    // chi: external states with an edge into any local state
    for (int c = 0; c < nc; ++c) {
        auto& s = specs[c];
        std::set<int> chi, neigh;
        for (int xi : s.state_indices) {
            const int row = node_of_state[xi];
            for (int v = 0; v < n; ++v) {
                if (graph.A(row, v) == 0.0) continue;
                const auto& src = graph.nodes[v];
                if (src.kind == NodeKind::State && partition.community[v] != c) {
                    chi.insert(src.source_index);
                    neigh.insert(partition.community[v]);
                }
            }
        }
        s.interaction_states.assign(chi.begin(), chi.end());
        s.neighbors.assign(neigh.begin(), neigh.end());
    }

    // inputs go with the states they directly drive; replicated when shared
    const MatrixXd Bu = model.jac_f_u(x_eq, u_eq, theta_eq);
    for (int j = 0; j < model.n_u; ++j) {
        std::set<int> comms;
        for (int k = 0; k < model.n_x; ++k) {
            if (std::abs(Bu(k, j)) <= input_threshold) continue;
            if (node_of_state[k] >= 0) comms.insert(partition.community[node_of_state[k]]);
        }
        for (int c : comms) specs[c].input_indices.push_back(j);
    }
    return specs;
}

std::vector<SubsystemVerdict> subsystem_observability_check(const std::vector<SubsystemSpec>& specs,
                                                            const AugmentedModel& aug,
                                                            const Trajectory& traj, int window,
                                                            double rank_tol) {
    std::vector<SubsystemVerdict> verdicts;
    const int nx = aug.base.n_x;
    if (traj.steps() < window - 1)
        throw std::invalid_argument("subsystem_observability_check: trajectory shorter than window");
    const int t = std::min<int>(traj.steps(), 2 * window - 1); // a window past the start

    for (const auto& s : specs) {
        SubsystemVerdict v;
        v.id = s.id;
        v.has_output = !s.output_indices.empty();
        v.required = s.n_local_aug();
        if (!v.has_output) {
            v.pass = false;
            verdicts.push_back(v);
            continue;
        }
        // local augmented index set: states then parameters
        std::vector<int> loc;
        for (int xi : s.state_indices) loc.push_back(xi);
        for (int pi : s.param_indices) loc.push_back(nx + pi);
        const int nl = static_cast<int>(loc.size());
        const int nyl = static_cast<int>(s.output_indices.size());

        MatrixXd S(window * nyl, nl);
        MatrixXd P = MatrixXd::Identity(nl, nl);
        VectorXd x_aug(aug.n_aug);
        const int start = t - window + 1;
        for (int i = start; i <= t; ++i) {
            x_aug.head(nx) = traj.x[i];
            x_aug.tail(aug.base.n_p) = traj.theta;
            const MatrixXd C = aug.jac_aug_h(x_aug);
            MatrixXd Cl(nyl, nl);
            for (int r = 0; r < nyl; ++r)
                for (int c = 0; c < nl; ++c) Cl(r, c) = C(s.output_indices[r], loc[c]);
            S.middleRows((i - start) * nyl, nyl) = Cl * P;
            if (i < t) {
                const MatrixXd A = aug.jac_aug_x(x_aug, traj.u[i]);
                MatrixXd Al(nl, nl);
                for (int r = 0; r < nl; ++r)
                    for (int c = 0; c < nl; ++c) Al(r, c) = A(loc[r], loc[c]);
                P = Al * P;
            }
        }
        const double tol = rank_tol > 0 ? rank_tol : default_rank_tol((int)S.rows(), (int)S.cols());
        const auto rep = rank_and_condition(S, tol);
        v.rank = rep.rank;
        v.pass = rep.rank == v.required;
        verdicts.push_back(v);
    }
    return verdicts;
}

} // namespace dsape
