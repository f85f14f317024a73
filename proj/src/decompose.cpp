#include "ttr1/decompose.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "ttr1/svd.hpp"

namespace ttr1 {

namespace {

struct Pending {
    Index node; ///< index into the node vector, -1 for the root
    Eigen::VectorXd v;
    std::vector<Index> path;
    std::vector<double> sigmas;
    double prefix = 1.0;        ///< product of sigmas along the path, this node included
    double parent_prefix = 1.0; ///< product of the strict ancestors' sigmas
};

/// min(n_k, prod of later dims) for tree level k = 0..d-2.
std::vector<Index> branch_counts(const Shape& shape) {
    const Index d = shape.order();
    std::vector<Index> r(static_cast<std::size_t>(d - 1));
    for (Index k = 0; k + 1 < d; ++k) {
        r[static_cast<std::size_t>(k)] = std::min(shape.dim(k), shape.dim_product(k + 1, d));
    }
    return r;
}

} // namespace

Shape Decomposition::permuted_shape() const {
    std::vector<Index> dims(order.order.size());
    for (std::size_t m = 0; m < dims.size(); ++m) {
        dims[m] = shape.dim(order.order[m]);
    }
    return Shape{std::move(dims)};
}

std::vector<double> Decomposition::weights() const {
    std::vector<double> w;
    w.reserve(terms.size());
    for (const Term& t : terms) w.push_back(t.weight);
    return w;
}

Decomposition decompose(const DenseTensor& t) {
    return decompose(t, IndexPermutation::identity(t.order()), {});
}

Decomposition decompose(const DenseTensor& t, const IndexPermutation& order,
                        const DecomposeOptions& options) {
    const Index d = t.order();
    if (d < 2) {
        throw ArgumentError("decompose: tensor order must be at least 2");
    }
    if (!order.valid(d)) {
        throw ArgumentError("decompose: invalid index permutation");
    }
    if (options.prune_eps && *options.prune_eps <= 0.0) {
        throw ArgumentError("decompose: prune tolerance must be positive");
    }

    Decomposition dec;
    dec.shape = t.shape();
    dec.order = order;
    dec.prune_tolerance = options.prune_eps;

    const DenseTensor work = order.is_identity() ? t : permute_indices(t, order);
    const Shape& ws = work.shape();
    const std::vector<Index> r = branch_counts(ws);

    std::vector<TreeNode> nodes;
    std::vector<Pending> frontier;
    frontier.push_back({-1, work.vec(), {}, {}, 1.0, 1.0});

    const double budget = options.prune_eps ? (*options.prune_eps) * (*options.prune_eps) : 0.0;
    double spent = 0.0;
    std::vector<Index> leaves;

    for (Index lvl = 0; lvl + 1 < d; ++lvl) {
        const Index rows = ws.dim(lvl);
        const Index cols = ws.dim_product(lvl + 1, d);
        const bool children_are_leaves = (lvl + 2 == d);

        std::vector<Pending> next;
        for (Pending& pn : frontier) {
            Eigen::Map<const Eigen::MatrixXd> m(pn.v.data(), rows, cols);
            MatrixSvd svd = svd_econ(m);
            ++dec.svd_count;
            const Index nb = std::min(rows, cols);
            for (Index c = 0; c < nb; ++c) {
                TreeNode node;
                node.level = lvl + 1;
                node.parent = pn.node;
                node.sigma = svd.s[c];
                node.u = svd.u.col(c);
                const Index ni = static_cast<Index>(nodes.size());
                std::vector<Index> path = pn.path;
                path.push_back(c);
                std::vector<double> sigmas = pn.sigmas;
                sigmas.push_back(svd.s[c]);
                if (children_are_leaves) {
                    node.v = svd.v.col(c);
                    nodes.push_back(std::move(node));
                    leaves.push_back(ni);
                    Term term;
                    term.weight = pn.prefix * svd.s[c];
                    term.path = std::move(path);
                    term.path_sigmas = std::move(sigmas);
                    dec.terms.push_back(std::move(term));
                } else {
                    if (options.keep_internal_v) node.v = svd.v.col(c);
                    nodes.push_back(std::move(node));
                    next.push_back({ni, svd.v.col(c), std::move(path), std::move(sigmas),
                                    pn.prefix * svd.s[c], pn.prefix});
                }
            }
            pn.v.resize(0); // internal v vectors are not needed past this point
        }

        // subtree pruning: children at level lvl+1 that would require an SVD
        if (options.prune_eps && !next.empty()) {
            const Index l = lvl + 1; // level of the candidate sigma
            Index leaves_per = 1;
            for (Index i = l; i + 1 < d; ++i) leaves_per *= r[static_cast<std::size_t>(i)];
            std::vector<std::pair<double, std::size_t>> cand(next.size());
            for (std::size_t k = 0; k < next.size(); ++k) {
                const double sk = next[k].sigmas.back();
                const double sk0 = next[k].parent_prefix;
                // estimated contribution of the discarded subtree: the
                // level-products bound, floored by the exact discarded mass
                const double e_est = std::sqrt(static_cast<double>(leaves_per)) * sk0 *
                                     std::pow(sk, static_cast<double>(d - l - 1));
                const double exact = sk0 * sk;
                const double e = std::max(e_est, exact);
                cand[k] = {e * e, k};
            }
            std::sort(cand.begin(), cand.end());
            std::vector<bool> drop(next.size(), false);
            for (const auto& [e2, k] : cand) {
                if (spent + e2 > budget) break;
                spent += e2;
                drop[k] = true;
                dec.pruned_leaf_count += leaves_per;
            }
            std::vector<Pending> kept;
            kept.reserve(next.size());
            for (std::size_t k = 0; k < next.size(); ++k) {
                if (!drop[k]) kept.push_back(std::move(next[k]));
            }
            next = std::move(kept);
        }
        frontier = std::move(next);
        if (frontier.empty() && lvl + 2 < d) break; // everything pruned
    }

    // assemble mode vectors by walking each leaf's ancestor chain
    for (std::size_t ti = 0; ti < dec.terms.size(); ++ti) {
        Term& term = dec.terms[ti];
        const Index leaf = leaves[ti];
        std::vector<Eigen::VectorXd> modes(static_cast<std::size_t>(d));
        modes[static_cast<std::size_t>(d - 1)] = nodes[static_cast<std::size_t>(leaf)].v;
        Index cur = leaf;
        while (cur >= 0) {
            const TreeNode& n = nodes[static_cast<std::size_t>(cur)];
            modes[static_cast<std::size_t>(n.level - 1)] = n.u;
            cur = n.parent;
        }
        term.mode_vectors = std::move(modes);
    }

    std::sort(dec.terms.begin(), dec.terms.end(), [](const Term& a, const Term& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.path < b.path;
    });

    if (options.keep_tree) {
        dec.tree = std::move(nodes);
    }
    return dec;
}

Decomposition decompose_pruned(const DenseTensor& t, double eps) {
    DecomposeOptions options;
    options.prune_eps = eps;
    return decompose(t, IndexPermutation::identity(t.order()), options);
}

DenseTensor reconstruct(const Decomposition& dec, std::optional<Index> R) {
    const Index n = static_cast<Index>(dec.terms.size());
    const Index keep = R.value_or(n);
    if (keep < 0 || keep > n) {
        throw ArgumentError("reconstruct: term count out of range");
    }
    DenseTensor sum = DenseTensor::zeros(dec.permuted_shape());
    for (Index i = 0; i < keep; ++i) {
        sum = sum + dec.terms[static_cast<std::size_t>(i)].materialize();
    }
    if (!dec.order.is_identity()) {
        sum = permute_indices(sum, dec.order.inverse());
    }
    return sum;
}

double approximation_error(const Decomposition& dec, Index R) {
    const Index n = static_cast<Index>(dec.terms.size());
    if (R < 0 || R > n) {
        throw ArgumentError("approximation_error: term count out of range");
    }
    double acc = 0.0;
    for (Index i = n - 1; i >= R; --i) {
        const double w = dec.terms[static_cast<std::size_t>(i)].weight;
        acc += w * w;
    }
    return std::sqrt(acc);
}

Index truncate_to_tolerance(const Decomposition& dec, double eps) {
    if (eps <= 0.0) {
        throw ArgumentError("truncate_to_tolerance: eps must be positive");
    }
    Index count = 0;
    for (const Term& t : dec.terms) {
        if (t.weight > eps) ++count;
    }
    return count;
}

double approxi_rank_gap(const Decomposition& dec, Index R) {
    const Index n = static_cast<Index>(dec.terms.size());
    if (R < 1 || R >= n) {
        throw ArgumentError("approxi_rank_gap: R must satisfy 1 <= R < term count");
    }
    const double hi = dec.terms[static_cast<std::size_t>(R - 1)].weight;
    const double lo = dec.terms[static_cast<std::size_t>(R)].weight;
    if (lo == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return hi / lo;
}

Index term_count_bound(const Shape& shape) {
    if (shape.order() < 2) {
        throw ArgumentError("term_count_bound: tensor order must be at least 2");
    }
    Index n = 1;
    for (Index r : branch_counts(shape)) n *= r;
    return n;
}

Index svd_count_bound(const Shape& shape) {
    if (shape.order() < 2) {
        throw ArgumentError("svd_count_bound: tensor order must be at least 2");
    }
    const std::vector<Index> r = branch_counts(shape);
    Index total = 1;
    Index prefix = 1;
    for (Index i = 0; i + 2 < shape.order(); ++i) {
        prefix *= r[static_cast<std::size_t>(i)];
        total += prefix;
    }
    return total;
}

double default_rank_threshold(const Decomposition& dec) {
    if (dec.terms.empty()) return 0.0;
    const Shape ws = dec.permuted_shape();
    Index maxdim = 0;
    for (Index k = 0; k + 1 < ws.order(); ++k) {
        maxdim = std::max({maxdim, ws.dim(k), ws.dim_product(k + 1, ws.order())});
    }
    return static_cast<double>(maxdim) * DBL_EPSILON * dec.terms.front().weight;
}

Index numerical_rank(const Decomposition& dec, std::optional<double> threshold) {
    const double thr = threshold.value_or(default_rank_threshold(dec));
    Index count = 0;
    for (const Term& t : dec.terms) {
        if (t.weight > thr) ++count;
    }
    return count;
}

} // namespace ttr1
