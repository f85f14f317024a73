// Python bindings for the main operations. Tensors cross the boundary as
// numpy arrays; decompositions and reports come back as lightweight bound
// structs.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ttr1/analysis.hpp"
#include "ttr1/complement.hpp"
#include "ttr1/cp_als.hpp"
#include "ttr1/decompose.hpp"
#include "ttr1/random.hpp"
#include "ttr1/rank3.hpp"
#include "ttr1/tucker.hpp"

namespace py = pybind11;
using namespace ttr1;

namespace {

DenseTensor tensor_from_array(const py::array_t<double>& arr) {
    const py::buffer_info info = arr.request();
    if (info.ndim < 1) {
        throw ArgumentError("tensor: at least one dimension required");
    }
    std::vector<Index> dims(info.shape.begin(), info.shape.end());
    const Shape shape{dims};
    // copy into column-major order via fortran-style conversion
    py::array_t<double, py::array::f_style | py::array::forcecast> farr(arr);
    const double* src = farr.data();
    std::vector<double> data(src, src + shape.element_count());
    return {shape, std::move(data)};
}

py::array_t<double> array_from_tensor(const DenseTensor& t) {
    std::vector<py::ssize_t> shape(t.shape().dims().begin(), t.shape().dims().end());
    std::vector<py::ssize_t> strides(shape.size());
    py::ssize_t stride = static_cast<py::ssize_t>(sizeof(double));
    for (std::size_t k = 0; k < shape.size(); ++k) {
        strides[k] = stride;
        stride *= shape[k];
    }
    return py::array_t<double>(shape, strides, t.data().data());
}

IndexPermutation perm_from_list(const std::optional<std::vector<Index>>& order, Index d) {
    if (!order) return IndexPermutation::identity(d);
    return IndexPermutation{*order};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "orthogonal rank-1 tensor expansion (tree of SVDs), with helpers";

    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Term>(m, "Term")
        .def_readonly("weight", &Term::weight)
        .def_readonly("path", &Term::path)
        .def_readonly("path_sigmas", &Term::path_sigmas)
        .def_property_readonly("mode_vectors",
                               [](const Term& t) {
                                   py::list out;
                                   for (const auto& v : t.mode_vectors) {
                                       out.append(py::cast(v));
                                   }
                                   return out;
                               })
        .def("materialize",
             [](const Term& t) { return array_from_tensor(t.materialize()); });

    py::class_<Decomposition>(m, "Decomposition")
        .def_property_readonly("dims",
                               [](const Decomposition& d) { return d.shape.dims(); })
        .def_property_readonly(
            "index_order", [](const Decomposition& d) { return d.order.order; })
        .def_readonly("terms", &Decomposition::terms)
        .def_readonly("svd_count", &Decomposition::svd_count)
        .def_readonly("prune_tolerance", &Decomposition::prune_tolerance)
        .def_readonly("pruned_leaf_count", &Decomposition::pruned_leaf_count)
        .def_property_readonly("weights", &Decomposition::weights)
        .def("reconstruct",
             [](const Decomposition& d, std::optional<Index> rank) {
                 return array_from_tensor(reconstruct(d, rank));
             },
             py::arg("rank") = std::nullopt)
        .def("approximation_error",
             [](const Decomposition& d, Index rank) {
                 return approximation_error(d, rank);
             },
             py::arg("rank"))
        .def("truncate_to_tolerance",
             [](const Decomposition& d, double eps) {
                 return truncate_to_tolerance(d, eps);
             },
             py::arg("eps"))
        .def("approxi_rank_gap",
             [](const Decomposition& d, Index rank) { return approxi_rank_gap(d, rank); },
             py::arg("rank"))
        .def("numerical_rank",
             [](const Decomposition& d, std::optional<double> threshold) {
                 return numerical_rank(d, threshold);
             },
             py::arg("threshold") = std::nullopt);

    m.def(
        "decompose",
        [](const py::array_t<double>& arr, std::optional<std::vector<Index>> order,
           std::optional<double> prune_eps) {
            const DenseTensor t = tensor_from_array(arr);
            DecomposeOptions options;
            options.prune_eps = prune_eps;
            return decompose(t, perm_from_list(order, t.order()), options);
        },
        py::arg("tensor"), py::arg("order") = std::nullopt,
        py::arg("prune_eps") = std::nullopt,
        "expand a dense tensor into sorted orthogonal rank-1 terms");

    m.def("term_count_bound", [](const std::vector<Index>& dims) {
        return term_count_bound(Shape{dims});
    });
    m.def("svd_count_bound", [](const std::vector<Index>& dims) {
        return svd_count_bound(Shape{dims});
    });

    py::class_<TuckerDecomposition>(m, "TuckerDecomposition")
        .def_property_readonly(
            "core", [](const TuckerDecomposition& td) { return array_from_tensor(td.core); })
        .def_readonly("factors", &TuckerDecomposition::factors)
        .def_readonly("nnz", &TuckerDecomposition::nnz)
        .def("reconstruct", [](const TuckerDecomposition& td) {
            return array_from_tensor(tucker_reconstruct(td));
        });

    m.def(
        "to_tucker",
        [](const Decomposition& dec, Index rank) { return to_tucker(dec, rank); },
        py::arg("decomposition"), py::arg("rank"));
    m.def(
        "to_tucker_terms",
        [](const Decomposition& dec, const std::vector<Index>& idx) {
            return to_tucker(dec, idx);
        },
        py::arg("decomposition"), py::arg("term_indices"));

    py::class_<ComplementBasis>(m, "ComplementBasis")
        .def_property_readonly("zero_weight_terms",
                               [](const ComplementBasis& b) {
                                   py::list out;
                                   for (const auto& term : b.zero_weight_terms) {
                                       out.append(array_from_tensor(term.materialize()));
                                   }
                                   return out;
                               })
        .def_property_readonly("mixing_terms",
                               [](const ComplementBasis& b) {
                                   py::list out;
                                   for (const auto& mix : b.mixing_terms) {
                                       out.append(array_from_tensor(mix));
                                   }
                                   return out;
                               })
        .def_property_readonly("count", &ComplementBasis::count);

    m.def("complement_basis", [](const py::array_t<double>& arr) {
        return complement_basis(tensor_from_array(arr));
    });

    py::class_<Rank3Result>(m, "Rank3Result")
        .def_property_readonly("status",
                               [](const Rank3Result& r) { return to_string(r.status); })
        .def_property_readonly("terms",
                               [](const Rank3Result& r) {
                                   py::list out;
                                   for (const auto& term : r.terms) {
                                       out.append(py::make_tuple(
                                           term.weight,
                                           array_from_tensor(term.materialize())));
                                   }
                                   return out;
                               })
        .def("materialize", [](const Rank3Result& r) {
            return array_from_tensor(r.materialize(Shape{2, 2, 2}));
        });

    m.def("construct_rank3", [](const py::array_t<double>& arr) {
        return construct_rank3(tensor_from_array(arr));
    });

    py::class_<CpDecomposition>(m, "CpDecomposition")
        .def_readonly("weights", &CpDecomposition::weights)
        .def_readonly("factors", &CpDecomposition::factors)
        .def_readonly("fit_history", &CpDecomposition::fit_history);

    m.def(
        "cp_als",
        [](const py::array_t<double>& arr, Index rank, std::uint64_t seed, Index max_iters,
           double tol) { return cp_als(tensor_from_array(arr), rank, seed, max_iters, tol); },
        py::arg("tensor"), py::arg("rank"), py::arg("seed") = 1,
        py::arg("max_iters") = 500, py::arg("tol") = 1e-10);
    m.def("cp_error", [](const py::array_t<double>& arr, const CpDecomposition& cp) {
        return cp_error(tensor_from_array(arr), cp);
    });

    m.def("permutation_scan", [](const py::array_t<double>& arr) {
        const PermutationScan scan = permutation_scan(tensor_from_array(arr));
        py::list rows;
        for (const auto& row : scan.rows) {
            py::dict d;
            d["order"] = row.perm.order;
            d["term_count"] = row.term_count;
            d["rank_bound"] = row.rank_bound;
            d["numerical_rank"] = row.numerical_rank;
            d["weights"] = row.weights;
            rows.append(d);
        }
        return py::make_tuple(rows, scan.min_rank_bound);
    });

    m.def(
        "gaussian_tensor",
        [](const std::vector<Index>& dims, std::uint64_t seed, double scale) {
            return array_from_tensor(gaussian_tensor(Shape{dims}, seed, scale));
        },
        py::arg("dims"), py::arg("seed"), py::arg("scale") = 1.0);
}
