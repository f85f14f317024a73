#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ttr1/errors.hpp"

namespace ttr1 {

using Index = Eigen::Index;

/// Dimension list n_1,...,n_d of a d-way tensor. Every dimension is >= 1.
class Shape {
public:
    Shape() = default;
    Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}
    explicit Shape(std::vector<Index> dims);

    Index order() const { return static_cast<Index>(dims_.size()); }
    Index dim(Index k) const { return dims_[static_cast<std::size_t>(k)]; }
    const std::vector<Index>& dims() const { return dims_; }
    Index element_count() const;
    /// Product of dimensions begin..end (half-open, 0-based).
    Index dim_product(Index begin, Index end) const;

    bool operator==(const Shape&) const = default;

private:
    std::vector<Index> dims_;
};

/// Reordering of tensor axes: output axis m is input axis order[m] (0-based).
struct IndexPermutation {
    std::vector<Index> order;

    static IndexPermutation identity(Index d);
    IndexPermutation inverse() const;
    bool is_identity() const;
    /// True when order is a bijection on {0,...,d-1}.
    bool valid(Index d) const;

    bool operator==(const IndexPermutation&) const = default;
};

/// Dense real d-way tensor, immutable after construction.
///
/// Data is stored flat in column-major order: the first index varies
/// fastest, so element (i_1,...,i_d) (0-based) lives at
/// data[i_1 + n_1*(i_2 + n_2*(i_3 + ...))]. This linearization is normative
/// for all reshapes and for the JSON file format.
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(Shape shape, std::vector<double> data);

    static DenseTensor zeros(const Shape& shape);
    /// Fill by evaluating f on every (0-based) multi-index.
    static DenseTensor from_function(
        const Shape& shape,
        const std::function<double(std::span<const Index>)>& f);

    const Shape& shape() const { return shape_; }
    Index order() const { return shape_.order(); }
    Index size() const { return static_cast<Index>(data_.size()); }
    const std::vector<double>& data() const { return data_; }

    double operator()(std::span<const Index> idx) const;
    double operator()(std::initializer_list<Index> idx) const {
        return (*this)(std::span<const Index>(idx.begin(), idx.size()));
    }

    Eigen::Map<const Eigen::VectorXd> vec() const {
        return {data_.data(), static_cast<Index>(data_.size())};
    }

private:
    Shape shape_;
    std::vector<double> data_;
};

/// Group the first `split` indices as rows and the rest as columns,
/// both linearized column-major. Requires 1 <= split < d.
Eigen::MatrixXd reshape_to_matrix(const DenseTensor& t, Index split);

/// Tensor data as a vector in the documented column-major order.
Eigen::VectorXd vectorize(const DenseTensor& t);

double inner_product(const DenseTensor& a, const DenseTensor& b);
double frobenius_norm(const DenseTensor& t);

/// Contract mode k (0-based) with the rows of m; m must have dim(k) columns.
DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, Index mode);

/// weight * v_1 o v_2 o ... o v_d.
DenseTensor outer_product(double weight, const std::vector<Eigen::VectorXd>& vectors);

/// B such that B[i_{p(1)},...,i_{p(d)}] = A[i_1,...,i_d].
DenseTensor permute_indices(const DenseTensor& t, const IndexPermutation& p);

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(double s, const DenseTensor& t);

/// One rank-1 outer product: weight times unit mode vectors.
struct RankOneTerm {
    double weight = 0.0;
    std::vector<Eigen::VectorXd> mode_vectors;

    DenseTensor materialize() const { return outer_product(weight, mode_vectors); }
};

} // namespace ttr1
