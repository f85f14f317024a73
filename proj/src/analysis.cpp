#include "ttr1/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ttr1/cp_als.hpp"
#include "ttr1/svd.hpp"

namespace ttr1 {

PermutationScan permutation_scan(const DenseTensor& t) {
    const Index d = t.order();
    if (d > 6) {
        throw ArgumentError("permutation_scan: refusing factorial scan for order > 6");
    }
    if (d < 2) {
        throw ArgumentError("permutation_scan: tensor order must be at least 2");
    }
    std::vector<Index> axes(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) axes[static_cast<std::size_t>(i)] = i;

    PermutationScan scan;
    scan.min_rank_bound = 0;
    do {
        PermutationScanRow row;
        row.perm = IndexPermutation{axes};
        const Decomposition dec = decompose(t, row.perm, {});
        row.term_count = static_cast<Index>(dec.terms.size());
        row.rank_bound = term_count_bound(dec.permuted_shape());
        row.numerical_rank = numerical_rank(dec);
        row.weights = dec.weights();
        if (scan.rows.empty() || row.rank_bound < scan.min_rank_bound) {
            scan.min_rank_bound = row.rank_bound;
        }
        scan.rows.push_back(std::move(row));
    } while (std::next_permutation(axes.begin(), axes.end()));
    return scan;
}

namespace {

/// Smallest rank whose seeded ALS fit reaches absolute error 1e-10.
Index cp_rank_by_threshold(const DenseTensor& t, Index max_rank) {
    for (Index r = 1; r <= max_rank; ++r) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const CpDecomposition cp = cp_als(t, r, seed, 300, 1e-12);
            if (cp_error(t, cp) <= 1e-10) return r;
        }
    }
    return max_rank + 1;
}

} // namespace

std::vector<DeflationStep> deflation_experiment(const DenseTensor& t, Index iterations,
                                                bool with_cp_rank) {
    if (iterations < 1) {
        throw ArgumentError("deflation_experiment: iterations must be at least 1");
    }
    std::vector<DeflationStep> steps;
    DenseTensor x = t;
    std::optional<double> fixed_threshold;
    for (Index it = 0; it <= iterations; ++it) {
        const Decomposition dec = decompose(x);
        if (!fixed_threshold) {
            fixed_threshold = default_rank_threshold(dec);
        }
        DeflationStep step;
        step.weights = dec.weights();
        step.ttr1_rank = numerical_rank(dec, fixed_threshold);
        step.residual_norm = frobenius_norm(x);
        if (with_cp_rank) {
            step.cp_rank = cp_rank_by_threshold(x, static_cast<Index>(dec.terms.size()));
        }
        steps.push_back(std::move(step));
        if (it < iterations) {
            x = x - dec.terms.front().materialize();
        }
    }
    return steps;
}

PerturbationReport perturbation_report(const DenseTensor& t, const DenseTensor& e) {
    if (t.shape() != e.shape()) {
        throw ArgumentError("perturbation_report: shapes differ");
    }
    const Index d = t.order();
    DecomposeOptions opts;
    opts.keep_tree = true;
    opts.keep_internal_v = true;
    const IndexPermutation id = IndexPermutation::identity(d);
    const Decomposition base = decompose(t, id, opts);
    const Decomposition pert = decompose(t + e, id, opts);

    PerturbationReport rep;
    rep.e_frob = frobenius_norm(e);
    rep.e_spec = svd_econ(reshape_to_matrix(e, 1)).s[0];

    const std::size_t n = std::min(base.terms.size(), pert.terms.size());
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(pert.terms[i].weight - base.terms[i].weight);
        rep.per_index_dev.push_back(dev);
        rss += dev * dev;
    }
    rep.rss_dev = std::sqrt(rss);

    // per-branch right-singular-vector deviations, matched by path
    std::map<std::vector<Index>, const TreeNode*> base_nodes, pert_nodes;
    auto index_nodes = [](const Decomposition& dec,
                          std::map<std::vector<Index>, const TreeNode*>& out) {
        // nodes are stored parents-first, siblings in child order
        std::vector<std::vector<Index>> paths(dec.tree.size());
        std::map<Index, Index> next_slot;
        for (std::size_t i = 0; i < dec.tree.size(); ++i) {
            const TreeNode& node = dec.tree[i];
            std::vector<Index> path;
            if (node.parent >= 0) {
                path = paths[static_cast<std::size_t>(node.parent)];
            }
            path.push_back(next_slot[node.parent]++);
            paths[i] = path;
            out[path] = &node;
        }
    };
    index_nodes(base, base_nodes);
    index_nodes(pert, pert_nodes);

    const double sigma1 = base.terms.empty() ? 0.0 : base.terms.front().path_sigmas.front();
    for (std::size_t i = 0; i < n; ++i) {
        const Term& term = base.terms[i];
        std::vector<double> dv;
        for (Index lvl = 1; lvl <= d - 3; ++lvl) {
            std::vector<Index> prefix(term.path.begin(), term.path.begin() + lvl);
            const auto itb = base_nodes.find(prefix);
            const auto itp = pert_nodes.find(prefix);
            if (itb == base_nodes.end() || itp == pert_nodes.end()) continue;
            Eigen::VectorXd vb = itb->second->v;
            Eigen::VectorXd vp = itp->second->v;
            if (vb.size() == 0 || vp.size() != vb.size()) continue;
            if (vb.dot(vp) < 0.0) vp = -vp;
            dv.push_back((vp - vb).norm());
        }
        double bound = rep.e_spec;
        for (double x : dv) bound += sigma1 * x;
        rep.weyl_bound.push_back(bound);
        rep.delta_v_norms.push_back(std::move(dv));
    }
    return rep;
}

std::vector<TraceRow> intermediate_product_trace(const DenseTensor& t) {
    if (t.order() < 3) {
        throw ArgumentError("intermediate_product_trace: tensor order must be at least 3");
    }
    const Decomposition dec = decompose(t);
    std::vector<TraceRow> rows;
    rows.reserve(dec.terms.size());
    for (const Term& term : dec.terms) {
        TraceRow row;
        row.path = term.path;
        double run = 1.0;
        for (double s : term.path_sigmas) {
            run *= s;
            row.partial_products.push_back(run);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> sv_curve(const Decomposition& dec) {
    return dec.weights();
}

} // namespace ttr1
