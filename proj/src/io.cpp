#include "ttr1/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace ttr1 {

namespace {

using nlohmann::json;

json parse(std::istream& in, const char* what) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ArgumentError(std::string(what) + ": invalid JSON: " + e.what());
    }
    return j;
}

const json& field(const json& j, const char* name, const char* what) {
    const auto it = j.find(name);
    if (it == j.end()) {
        throw ArgumentError(std::string(what) + ": missing field '" + name + "'");
    }
    return *it;
}

std::vector<double> number_list(const json& j, const char* name, const char* what) {
    if (!j.is_array()) {
        throw ArgumentError(std::string(what) + ": field '" + name + "' must be an array");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) {
            throw ArgumentError(std::string(what) + ": field '" + name +
                                "' must contain numbers only");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

Shape shape_from(const json& j, const char* what) {
    const json& dims = field(j, "dims", what);
    if (!dims.is_array() || dims.empty()) {
        throw ArgumentError(std::string(what) + ": field 'dims' must be a non-empty array");
    }
    std::vector<Index> d;
    for (const auto& x : dims) {
        if (!x.is_number_integer() || x.get<Index>() < 1) {
            throw ArgumentError(std::string(what) +
                                ": field 'dims' must contain positive integers");
        }
        d.push_back(x.get<Index>());
    }
    return Shape{std::move(d)};
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& j, const char* name, const char* what) {
    const std::vector<double> data = number_list(j, name, what);
    return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Index>(data.size()));
}

void dump(std::ostream& out, const json& j) {
    out << j.dump(2) << '\n';
}

} // namespace

DenseTensor read_tensor_json(std::istream& in) {
    const char* what = "tensor file";
    const json j = parse(in, what);
    if (!j.is_object()) {
        throw ArgumentError(std::string(what) + ": top level must be an object");
    }
    const Shape shape = shape_from(j, what);
    const json& order = field(j, "order", what);
    if (!order.is_string() || order.get<std::string>() != "column-major") {
        throw ArgumentError(std::string(what) + ": field 'order' must be \"column-major\"");
    }
    std::vector<double> data = number_list(field(j, "data", what), "data", what);
    if (static_cast<Index>(data.size()) != shape.element_count()) {
        throw ArgumentError(std::string(what) +
                            ": field 'data' length does not match the product of 'dims'");
    }
    return {shape, std::move(data)};
}

void write_tensor_json(std::ostream& out, const DenseTensor& t) {
    json j;
    j["dims"] = t.shape().dims();
    j["order"] = "column-major";
    j["data"] = t.data();
    dump(out, j);
}

Decomposition read_decomposition_json(std::istream& in) {
    const char* what = "decomposition file";
    const json j = parse(in, what);
    Decomposition dec;
    dec.shape = shape_from(j, what);

    const json& order = field(j, "index_order", what);
    if (!order.is_array() || order.size() != static_cast<std::size_t>(dec.shape.order())) {
        throw ArgumentError(std::string(what) + ": field 'index_order' has wrong length");
    }
    for (const auto& x : order) {
        dec.order.order.push_back(x.get<Index>() - 1);
    }
    if (!dec.order.valid(dec.shape.order())) {
        throw ArgumentError(std::string(what) + ": field 'index_order' is not a permutation");
    }

    dec.svd_count = field(j, "svd_count", what).get<Index>();
    const json& tol = field(j, "prune_tolerance", what);
    if (!tol.is_null()) dec.prune_tolerance = tol.get<double>();
    dec.pruned_leaf_count = field(j, "pruned_leaf_count", what).get<Index>();

    const json& terms = field(j, "terms", what);
    if (!terms.is_array()) {
        throw ArgumentError(std::string(what) + ": field 'terms' must be an array");
    }
    const Shape pshape = dec.permuted_shape();
    for (const json& tj : terms) {
        Term term;
        term.weight = field(tj, "weight", what).get<double>();
        for (const auto& x : field(tj, "path", what)) {
            term.path.push_back(x.get<Index>() - 1);
        }
        for (const auto& x : field(tj, "path_sigmas", what)) {
            term.path_sigmas.push_back(x.get<double>());
        }
        const json& modes = field(tj, "modes", what);
        if (!modes.is_array() || modes.size() != static_cast<std::size_t>(pshape.order())) {
            throw ArgumentError(std::string(what) + ": term field 'modes' has wrong arity");
        }
        Index k = 0;
        for (const json& mj : modes) {
            Eigen::VectorXd v = vector_from_json(mj, "modes", what);
            if (v.size() != pshape.dim(k)) {
                throw ArgumentError(std::string(what) +
                                    ": term mode vector length does not match dims");
            }
            term.mode_vectors.push_back(std::move(v));
            ++k;
        }
        dec.terms.push_back(std::move(term));
    }
    return dec;
}

void write_decomposition_json(std::ostream& out, const Decomposition& dec) {
    json j;
    j["dims"] = dec.shape.dims();
    json order = json::array();
    for (Index o : dec.order.order) order.push_back(o + 1);
    j["index_order"] = order;
    j["svd_count"] = dec.svd_count;
    j["prune_tolerance"] = dec.prune_tolerance ? json(*dec.prune_tolerance) : json(nullptr);
    j["pruned_leaf_count"] = dec.pruned_leaf_count;
    json terms = json::array();
    for (const Term& t : dec.terms) {
        json tj;
        tj["weight"] = t.weight;
        json path = json::array();
        for (Index p : t.path) path.push_back(p + 1);
        tj["path"] = path;
        tj["path_sigmas"] = t.path_sigmas;
        json modes = json::array();
        for (const Eigen::VectorXd& v : t.mode_vectors) modes.push_back(vector_to_json(v));
        tj["modes"] = modes;
        terms.push_back(std::move(tj));
    }
    j["terms"] = std::move(terms);
    dump(out, j);
}

void write_tucker_json(std::ostream& out, const TuckerDecomposition& td) {
    json j;
    j["core_dims"] = td.core.shape().dims();
    j["core"] = td.core.data();
    json factors = json::array();
    for (const Eigen::MatrixXd& f : td.factors) {
        json fj;
        fj["rows"] = f.rows();
        fj["cols"] = f.cols();
        json data = json::array();
        for (Index c = 0; c < f.cols(); ++c) {
            for (Index r = 0; r < f.rows(); ++r) data.push_back(f(r, c));
        }
        fj["data"] = data;
        factors.push_back(std::move(fj));
    }
    j["factors"] = std::move(factors);
    j["nnz"] = td.nnz;
    dump(out, j);
}

void write_complement_json(std::ostream& out, const ComplementBasis& basis,
                           const Shape& shape) {
    json j;
    j["dims"] = shape.dims();
    json elements = json::array();
    for (const RankOneTerm& term : basis.zero_weight_terms) {
        json ej;
        ej["kind"] = "zero-weight";
        ej["weight"] = term.weight;
        json modes = json::array();
        for (const Eigen::VectorXd& v : term.mode_vectors) modes.push_back(vector_to_json(v));
        ej["modes"] = modes;
        elements.push_back(std::move(ej));
    }
    for (const DenseTensor& mix : basis.mixing_terms) {
        json ej;
        ej["kind"] = "mixing";
        ej["data"] = mix.data();
        elements.push_back(std::move(ej));
    }
    j["elements"] = std::move(elements);
    dump(out, j);
}

void write_rank3_json(std::ostream& out, const Rank3Result& result) {
    json j;
    j["status"] = to_string(result.status);
    j["term_count"] = result.terms.size();
    json terms = json::array();
    for (const RankOneTerm& term : result.terms) {
        json tj;
        tj["weight"] = term.weight;
        json modes = json::array();
        for (const Eigen::VectorXd& v : term.mode_vectors) modes.push_back(vector_to_json(v));
        tj["modes"] = modes;
        terms.push_back(std::move(tj));
    }
    j["terms"] = std::move(terms);
    if (result.plan) {
        json pj;
        pj["alpha"] = result.plan->alpha;
        pj["beta"] = result.plan->beta;
        pj["gamma"] = result.plan->gamma;
        pj["delta"] = result.plan->delta;
        pj["order"] = result.plan->order == MergeOrder::second_then_third
                          ? "second-then-third"
                          : "third-then-second";
        j["plan"] = std::move(pj);
    }
    dump(out, j);
}

void write_curve_csv(std::ostream& out, const std::vector<double>& weights) {
    out << "index,sigma_tilde\n";
    std::ostringstream ss;
    ss.precision(17);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        ss.str("");
        ss << weights[i];
        out << (i + 1) << ',' << ss.str() << '\n';
    }
}

void write_permscan_csv(std::ostream& out, const PermutationScan& scan) {
    std::size_t max_terms = 0;
    for (const auto& row : scan.rows) max_terms = std::max(max_terms, row.weights.size());
    out << "permutation,term_count,rank_bound,numerical_rank";
    for (std::size_t i = 1; i <= max_terms; ++i) out << ",sigma_" << i;
    out << '\n';
    std::ostringstream ss;
    ss.precision(17);
    for (const auto& row : scan.rows) {
        for (std::size_t m = 0; m < row.perm.order.size(); ++m) {
            out << (m == 0 ? "" : ".") << (row.perm.order[m] + 1);
        }
        out << ',' << row.term_count << ',' << row.rank_bound << ',' << row.numerical_rank;
        for (std::size_t i = 0; i < max_terms; ++i) {
            out << ',';
            if (i < row.weights.size()) {
                ss.str("");
                ss << row.weights[i];
                out << ss.str();
            }
        }
        out << '\n';
    }
}

void write_deflation_csv(std::ostream& out, const std::vector<DeflationStep>& steps) {
    std::size_t max_terms = 0;
    for (const auto& s : steps) max_terms = std::max(max_terms, s.weights.size());
    out << "iteration,ttr1_rank,cp_rank,residual_norm";
    for (std::size_t i = 1; i <= max_terms; ++i) out << ",sigma_" << i;
    out << '\n';
    std::ostringstream ss;
    ss.precision(17);
    for (std::size_t it = 0; it < steps.size(); ++it) {
        const DeflationStep& s = steps[it];
        out << it << ',' << s.ttr1_rank << ',';
        if (s.cp_rank) out << *s.cp_rank;
        ss.str("");
        ss << s.residual_norm;
        out << ',' << ss.str();
        for (std::size_t i = 0; i < max_terms; ++i) {
            out << ',';
            if (i < s.weights.size()) {
                ss.str("");
                ss << s.weights[i];
                out << ss.str();
            }
        }
        out << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
    std::size_t levels = 0;
    for (const auto& r : rows) levels = std::max(levels, r.partial_products.size());
    out << "term,path";
    for (std::size_t i = 1; i <= levels; ++i) out << ",level_" << i;
    out << '\n';
    std::ostringstream ss;
    ss.precision(17);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        out << (t + 1) << ',';
        for (std::size_t m = 0; m < rows[t].path.size(); ++m) {
            out << (m == 0 ? "" : ".") << (rows[t].path[m] + 1);
        }
        for (std::size_t i = 0; i < levels; ++i) {
            out << ',';
            if (i < rows[t].partial_products.size()) {
                ss.str("");
                ss << rows[t].partial_products[i];
                out << ss.str();
            }
        }
        out << '\n';
    }
}

void write_perturbation_json(std::ostream& out, const PerturbationReport& report) {
    json j;
    j["e_frob"] = report.e_frob;
    j["e_spec"] = report.e_spec;
    j["per_index_dev"] = report.per_index_dev;
    j["rss_dev"] = report.rss_dev;
    j["weyl_bound"] = report.weyl_bound;
    j["delta_v_norms"] = report.delta_v_norms;
    dump(out, j);
}

} // namespace ttr1
