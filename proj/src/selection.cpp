#include "dsape/selection.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cassert>
#include <cmath>

namespace dsape {

double cutoff_value(double w_bar, double v_bar) {
    if (w_bar < 0.0 || v_bar < 0.0) throw std::invalid_argument("cutoff_value: noise levels must be >= 0");
    return 3.0 * std::sqrt(w_bar * w_bar + v_bar * v_bar);
}

namespace {

// Residuals of every column after projecting out span(selected columns).
// Thin-QR of the selected block keeps this stable when X is rank deficient.
VectorXd residual_norms_after(const MatrixXd& S, const std::vector<int>& selected) {
    if (selected.empty()) return S.colwise().norm();
    MatrixXd X(S.rows(), selected.size());
    for (size_t k = 0; k < selected.size(); ++k) X.col(static_cast<int>(k)) = S.col(selected[k]);
    Eigen::HouseholderQR<MatrixXd> qr(X);
    MatrixXd Qthin = qr.householderQ() * MatrixXd::Identity(S.rows(), X.cols());
    MatrixXd R = S - Qthin * (Qthin.transpose() * S);
    return R.colwise().norm();
}

} // namespace

SelectionResult orthogonalize_select(const MatrixXd& S, double alpha,
                                     const std::vector<int>& forced,
                                     const std::vector<int>& excluded) {
    if (alpha < 0.0) throw std::invalid_argument("orthogonalize_select: alpha must be >= 0");
    const int ncols = static_cast<int>(S.cols());

    std::set<int> seen;
    for (int f : forced) {
        if (f < 0 || f >= ncols) throw std::invalid_argument("orthogonalize_select: forced index out of range");
        if (!seen.insert(f).second) throw std::invalid_argument("orthogonalize_select: duplicate forced index");
    }
    std::set<int> banned(excluded.begin(), excluded.end());

    SelectionResult res;
    res.alpha = alpha;
    res.forced = forced;
    res.n_columns = ncols;
    res.selected = forced;

    std::vector<char> in_sel(ncols, 0);
    for (int f : forced) in_sel[f] = 1;

    double prev_norm = std::numeric_limits<double>::infinity();
    while (true) {
        const VectorXd norms = residual_norms_after(S, res.selected);
        int best = -1;
        double best_norm = -1.0;
        for (int j = 0; j < ncols; ++j) {
            if (in_sel[j] || banned.count(j)) continue;
            if (norms[j] > best_norm) { // strict > keeps the lowest index on ties
                best_norm = norms[j];
                best = j;
            }
        }
        if (best < 0) break;
        res.residual_norms.push_back(best_norm);
        assert(best_norm <= prev_norm + 1e-9 && "greedy residuals must be non-increasing");
        prev_norm = best_norm;
        if (best_norm <= alpha) break;
        res.selected.push_back(best);
        in_sel[best] = 1;
    }

    for (int j = 0; j < ncols; ++j)
        if (!in_sel[j]) res.unselected.push_back(j);
    return res;
}

SelectionTally tally_selection(const std::vector<SelectionResult>& results) {
    if (results.empty()) throw std::invalid_argument("tally_selection: no results");
    const int ncols = results.front().n_columns;
    SelectionTally tally;
    tally.counts.assign(ncols, 0);
    tally.total = static_cast<long>(results.size());
    for (const auto& r : results) {
        if (r.n_columns != ncols) throw std::invalid_argument("tally_selection: inconsistent dimensions");
        for (int j : r.selected) tally.counts[j] += 1;
    }
    return tally;
}

} // namespace dsape
