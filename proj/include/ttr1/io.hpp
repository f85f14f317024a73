#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ttr1/analysis.hpp"
#include "ttr1/complement.hpp"
#include "ttr1/decompose.hpp"
#include "ttr1/rank3.hpp"
#include "ttr1/tensor.hpp"
#include "ttr1/tucker.hpp"

namespace ttr1 {

/// Tensor JSON: {"dims": [n1,...,nd], "order": "column-major", "data": [...]}.
/// Readers reject files whose data length does not match the dims product or
/// whose order field is not "column-major".
DenseTensor read_tensor_json(std::istream& in);
void write_tensor_json(std::ostream& out, const DenseTensor& t);

/// Decomposition JSON: dims, 1-based index order, svd count, prune fields and
/// the term list (weight, 1-based branch path, per-level sigmas, mode
/// vectors). Loading and reconstructing reproduces the decomposed tensor.
Decomposition read_decomposition_json(std::istream& in);
void write_decomposition_json(std::ostream& out, const Decomposition& dec);

void write_tucker_json(std::ostream& out, const TuckerDecomposition& td);

/// Complement JSON: one element per basis tensor with a
/// "kind": "zero-weight" | "mixing" tag.
void write_complement_json(std::ostream& out, const ComplementBasis& basis,
                           const Shape& shape);

void write_rank3_json(std::ostream& out, const Rank3Result& result);

/// CSV writers (documented headers, one row per record).
void write_curve_csv(std::ostream& out, const std::vector<double>& weights);
void write_permscan_csv(std::ostream& out, const PermutationScan& scan);
void write_deflation_csv(std::ostream& out, const std::vector<DeflationStep>& steps);
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
void write_perturbation_json(std::ostream& out, const PerturbationReport& report);

} // namespace ttr1
