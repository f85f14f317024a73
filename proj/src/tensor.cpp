#include "ttr1/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttr1 {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw ArgumentError("shape: at least one dimension required");
    }
    for (Index n : dims_) {
        if (n < 1) {
            throw ArgumentError("shape: every dimension must be >= 1");
        }
    }
}

Index Shape::element_count() const {
    return dim_product(0, order());
}

Index Shape::dim_product(Index begin, Index end) const {
    Index p = 1;
    for (Index k = begin; k < end; ++k) {
        p *= dims_[static_cast<std::size_t>(k)];
    }
    return p;
}

IndexPermutation IndexPermutation::identity(Index d) {
    IndexPermutation p;
    p.order.resize(static_cast<std::size_t>(d));
    std::iota(p.order.begin(), p.order.end(), Index{0});
    return p;
}

IndexPermutation IndexPermutation::inverse() const {
    IndexPermutation inv;
    inv.order.resize(order.size());
    for (std::size_t m = 0; m < order.size(); ++m) {
        inv.order[static_cast<std::size_t>(order[m])] = static_cast<Index>(m);
    }
    return inv;
}

bool IndexPermutation::is_identity() const {
    for (std::size_t m = 0; m < order.size(); ++m) {
        if (order[m] != static_cast<Index>(m)) return false;
    }
    return true;
}

bool IndexPermutation::valid(Index d) const {
    if (static_cast<Index>(order.size()) != d) return false;
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    for (Index o : order) {
        if (o < 0 || o >= d || seen[static_cast<std::size_t>(o)]) return false;
        seen[static_cast<std::size_t>(o)] = true;
    }
    return true;
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
    if (static_cast<Index>(data_.size()) != shape_.element_count()) {
        throw ArgumentError("tensor: data length does not match shape");
    }
}

DenseTensor DenseTensor::zeros(const Shape& shape) {
    return {shape, std::vector<double>(static_cast<std::size_t>(shape.element_count()), 0.0)};
}

DenseTensor DenseTensor::from_function(
    const Shape& shape, const std::function<double(std::span<const Index>)>& f) {
    const Index d = shape.order();
    std::vector<double> data(static_cast<std::size_t>(shape.element_count()));
    std::vector<Index> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < data.size(); ++flat) {
        data[flat] = f(idx);
        for (Index k = 0; k < d; ++k) {
            auto& i = idx[static_cast<std::size_t>(k)];
            if (++i < shape.dim(k)) break;
            i = 0;
        }
    }
    return {shape, std::move(data)};
}

double DenseTensor::operator()(std::span<const Index> idx) const {
    if (static_cast<Index>(idx.size()) != order()) {
        throw ArgumentError("tensor: index arity does not match order");
    }
    Index flat = 0;
    Index stride = 1;
    for (Index k = 0; k < order(); ++k) {
        const Index i = idx[static_cast<std::size_t>(k)];
        if (i < 0 || i >= shape_.dim(k)) {
            throw ArgumentError("tensor: index out of range");
        }
        flat += i * stride;
        stride *= shape_.dim(k);
    }
    return data_[static_cast<std::size_t>(flat)];
}

Eigen::MatrixXd reshape_to_matrix(const DenseTensor& t, Index split) {
    const Index d = t.order();
    if (split < 1 || split >= d) {
        throw ArgumentError("reshape_to_matrix: split must satisfy 1 <= split < order");
    }
    const Index rows = t.shape().dim_product(0, split);
    const Index cols = t.shape().dim_product(split, d);
    return Eigen::Map<const Eigen::MatrixXd>(t.data().data(), rows, cols);
}

Eigen::VectorXd vectorize(const DenseTensor& t) {
    return t.vec();
}

double inner_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) {
        throw ArgumentError("inner_product: shapes differ");
    }
    return a.vec().dot(b.vec());
}

double frobenius_norm(const DenseTensor& t) {
    return t.vec().norm();
}

DenseTensor mode_product(const DenseTensor& t, const Eigen::MatrixXd& m, Index mode) {
    const Index d = t.order();
    if (mode < 0 || mode >= d) {
        throw ArgumentError("mode_product: mode out of range");
    }
    if (m.cols() != t.shape().dim(mode)) {
        throw ArgumentError("mode_product: matrix columns do not match mode dimension");
    }
    const Index left = t.shape().dim_product(0, mode);
    const Index nk = t.shape().dim(mode);
    const Index right = t.shape().dim_product(mode + 1, d);
    const Index p = m.rows();

    std::vector<Index> out_dims = t.shape().dims();
    out_dims[static_cast<std::size_t>(mode)] = p;
    std::vector<double> out(static_cast<std::size_t>(left * p * right));

    for (Index r = 0; r < right; ++r) {
        Eigen::Map<const Eigen::MatrixXd> block(t.data().data() + r * left * nk, left, nk);
        Eigen::Map<Eigen::MatrixXd> out_block(out.data() + r * left * p, left, p);
        out_block = block * m.transpose();
    }
    return {Shape(std::move(out_dims)), std::move(out)};
}

DenseTensor outer_product(double weight, const std::vector<Eigen::VectorXd>& vectors) {
    if (vectors.empty()) {
        throw ArgumentError("outer_product: at least one mode vector required");
    }
    std::vector<Index> dims;
    dims.reserve(vectors.size());
    for (const auto& v : vectors) dims.push_back(v.size());
    Shape shape{std::move(dims)};

    std::vector<double> data{weight};
    data.reserve(static_cast<std::size_t>(shape.element_count()));
    for (const auto& v : vectors) {
        const std::size_t prev = data.size();
        data.resize(prev * static_cast<std::size_t>(v.size()));
        // fill highest block first so the lower ones can be scaled in place
        for (Index j = v.size() - 1; j >= 0; --j) {
            double* dst = data.data() + static_cast<std::size_t>(j) * prev;
            const double s = v[j];
            if (j == 0) {
                for (std::size_t i = 0; i < prev; ++i) dst[i] *= s;
            } else {
                for (std::size_t i = 0; i < prev; ++i) dst[i] = data[i] * s;
            }
        }
    }
    return {std::move(shape), std::move(data)};
}

DenseTensor permute_indices(const DenseTensor& t, const IndexPermutation& p) {
    const Index d = t.order();
    if (!p.valid(d)) {
        throw ArgumentError("permute_indices: not a valid permutation of the axes");
    }
    std::vector<Index> out_dims(static_cast<std::size_t>(d));
    for (Index m = 0; m < d; ++m) {
        out_dims[static_cast<std::size_t>(m)] = t.shape().dim(p.order[static_cast<std::size_t>(m)]);
    }
    Shape out_shape{std::move(out_dims)};

    // out strides indexed by source axis: axis k of the input lands on the
    // output axis m with p.order[m] == k
    const IndexPermutation inv = p.inverse();
    std::vector<Index> out_stride_for_src(static_cast<std::size_t>(d));
    {
        Index stride = 1;
        std::vector<Index> out_strides(static_cast<std::size_t>(d));
        for (Index m = 0; m < d; ++m) {
            out_strides[static_cast<std::size_t>(m)] = stride;
            stride *= out_shape.dim(m);
        }
        for (Index k = 0; k < d; ++k) {
            out_stride_for_src[static_cast<std::size_t>(k)] =
                out_strides[static_cast<std::size_t>(inv.order[static_cast<std::size_t>(k)])];
        }
    }

    std::vector<double> out(t.data().size());
    std::vector<Index> idx(static_cast<std::size_t>(d), 0);
    Index out_flat = 0;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out[static_cast<std::size_t>(out_flat)] = t.data()[flat];
        for (Index k = 0; k < d; ++k) {
            auto& i = idx[static_cast<std::size_t>(k)];
            out_flat += out_stride_for_src[static_cast<std::size_t>(k)];
            if (++i < t.shape().dim(k)) break;
            out_flat -= i * out_stride_for_src[static_cast<std::size_t>(k)];
            i = 0;
        }
    }
    return {std::move(out_shape), std::move(out)};
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw ArgumentError("tensor addition: shapes differ");
    std::vector<double> out(a.data());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.data()[i];
    return {a.shape(), std::move(out)};
}

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
    if (a.shape() != b.shape()) throw ArgumentError("tensor subtraction: shapes differ");
    std::vector<double> out(a.data());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.data()[i];
    return {a.shape(), std::move(out)};
}

DenseTensor operator*(double s, const DenseTensor& t) {
    std::vector<double> out(t.data());
    for (double& x : out) x *= s;
    return {t.shape(), std::move(out)};
}

} // namespace ttr1
