#pragma once

#include "dsape/model.hpp"
#include "dsape/selection.hpp"

#include <string>
#include <vector>

namespace dsape {

enum class NodeKind { State, Parameter, Output };

struct GraphNode {
    NodeKind kind;
    int source_index; // index into the model's state / parameter / output vectors
    std::string name;
};

/// Directed graph over selected states, selected parameters and outputs.
/// A(i,j) = 1 iff there is an edge from node j to node i; the diagonal is
/// always zero (self-loops discarded).
struct DirectedGraph {
    std::vector<GraphNode> nodes;
    MatrixXd A;
    double m = 0.0;      // total edge count (sum of A)
    VectorXd k_in;       // row sums
    VectorXd k_out;      // column sums

    int size() const { return static_cast<int>(nodes.size()); }
    void finalize();     // zero diagonal, recompute m and degrees
};

struct Partition {
    std::vector<int> community; // per node, ids form a contiguous range from 0
    int n_communities = 0;

    static Partition from_labels(std::vector<int> labels);
    static Partition singletons(int n);
    static Partition single(int n);
};

struct GraphBuildOptions {
    double sparsity_threshold = 1e-9; // on normalized Jacobian entries
    bool use_structural = false;      // override numeric sparsity with the structural pattern
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structural_x;     // n_x x n_x
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> structural_theta; // n_x x n_p
};

/// Nodes are the selection's states and parameters plus every output; edges
/// come from the Jacobian blocks of f and h at the equilibrium (normalized by
/// the equilibrium magnitudes before thresholding).
DirectedGraph build_graph(const NonlinearModel& model, const SelectionResult& selected,
                          const VectorXd& x_eq, const VectorXd& theta_eq, const VectorXd& u_eq,
                          const GraphBuildOptions& opts = {});

/// Directed modularity; throws if m == 0 or the partition does not cover the
/// graph.
double modularity(const DirectedGraph& graph, const Partition& partition);

struct LouvainResult {
    Partition partition;
    double omega = 0.0;
    // distinct partitions encountered during the search, best first, at most 5
    std::vector<std::pair<double, Partition>> candidates;
};

/// Fast unfolding with best-improvement local moves and community
/// aggregation. Deterministic for a fixed node order; pass a permutation of
/// node indices to change the scan order (default ascending).
LouvainResult louvain(const DirectedGraph& graph, const std::vector<int>& node_order = {});

/// Exact maximizer of the modularity over all set partitions (node count <= 12).
std::pair<Partition, double> enumerate_partitions_bruteforce(const DirectedGraph& graph);

struct SubsystemSpec {
    int id = 0;
    std::vector<int> state_indices;      // model state indices
    std::vector<int> param_indices;      // model parameter indices
    std::vector<int> output_indices;     // model output indices
    std::vector<int> input_indices;      // model input indices (may repeat across subsystems)
    std::vector<int> interaction_states; // chi: external model state indices entering f_local
    std::vector<int> neighbors;          // subsystem ids owning chi states

    int n_local_aug() const { return static_cast<int>(state_indices.size() + param_indices.size()); }
};

std::vector<SubsystemSpec> extract_subsystems(const DirectedGraph& graph, const Partition& partition,
                                              const NonlinearModel& model,
                                              const VectorXd& x_eq, const VectorXd& theta_eq,
                                              const VectorXd& u_eq,
                                              double input_threshold = 1e-12);

struct SubsystemVerdict {
    int id = 0;
    bool has_output = false;
    int rank = 0;
    int required = 0;
    bool pass = false;
};

/// Windowed local observability screen: each subsystem's augmented model
/// (interactions treated as known signals) must be full rank along the
/// trajectory.
std::vector<SubsystemVerdict> subsystem_observability_check(const std::vector<SubsystemSpec>& specs,
                                                            const AugmentedModel& aug,
                                                            const Trajectory& traj, int window,
                                                            double rank_tol = -1.0);

struct DecompositionResult {
    Partition partition;
    double omega = 0.0;
    std::vector<SubsystemSpec> subsystems;
    std::vector<SubsystemVerdict> verdicts;
};

} // namespace dsape
