#pragma once

#include "dsape/model.hpp"

#include <set>
#include <vector>

namespace dsape {

/// alpha = 3 sqrt(w_bar^2 + v_bar^2)
double cutoff_value(double w_bar, double v_bar);

struct SelectionResult {
    std::vector<int> selected;        // forced columns first, then greedy order
    std::vector<double> residual_norms; // largest residual norm per greedy iteration
    double alpha = 0.0;
    std::vector<int> forced;
    std::vector<int> unselected;      // complement of selected, ascending
    int n_columns = 0;
};

/// Greedy orthogonalization selection. Forced columns seed the selected span;
/// the loop then repeatedly picks the candidate column with the largest
/// residual after projection onto the current span, stopping once that
/// residual drops to alpha or below. `excluded` columns are never candidates
/// (they still count toward the unselected set). Ties break toward the lowest
/// column index. Projections use Householder QR, never the normal-equations
/// inverse.
SelectionResult orthogonalize_select(const MatrixXd& S, double alpha,
                                     const std::vector<int>& forced,
                                     const std::vector<int>& excluded = {});

struct SelectionTally {
    std::vector<long> counts;   // per column
    long total = 0;             // number of sampling times
};

SelectionTally tally_selection(const std::vector<SelectionResult>& results);

} // namespace dsape
