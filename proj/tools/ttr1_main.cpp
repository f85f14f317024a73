// Command-line front end: every operation over the JSON tensor format.
//
// Exit codes: 0 success, 1 argument/usage/file error, 2 numerical error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ttr1/analysis.hpp"
#include "ttr1/complement.hpp"
#include "ttr1/cp_als.hpp"
#include "ttr1/decompose.hpp"
#include "ttr1/io.hpp"
#include "ttr1/random.hpp"
#include "ttr1/rank3.hpp"
#include "ttr1/tucker.hpp"

namespace {

using namespace ttr1;

std::unique_ptr<std::ifstream> open_input(const std::string& path) {
    if (path.empty() || path == "-") return nullptr; // stdin
    auto f = std::make_unique<std::ifstream>(path);
    if (!*f) {
        throw ArgumentError("cannot open input file: " + path);
    }
    return f;
}

std::istream& input_stream(std::unique_ptr<std::ifstream>& holder, const std::string& path) {
    holder = open_input(path);
    return holder ? static_cast<std::istream&>(*holder) : std::cin;
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path.empty() || path == "-") return nullptr; // stdout
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) {
        throw ArgumentError("cannot open output file: " + path);
    }
    return f;
}

std::ostream& output_stream(std::unique_ptr<std::ofstream>& holder, const std::string& path) {
    holder = open_output(path);
    return holder ? static_cast<std::ostream&>(*holder) : std::cout;
}

DenseTensor load_tensor(const std::string& path) {
    std::unique_ptr<std::ifstream> holder;
    return read_tensor_json(input_stream(holder, path));
}

Decomposition load_decomposition(const std::string& path) {
    std::unique_ptr<std::ifstream> holder;
    return read_decomposition_json(input_stream(holder, path));
}

/// "2,3,1" or "2.3.1" (1-based) to a 0-based permutation.
IndexPermutation parse_permutation(const std::string& text) {
    IndexPermutation p;
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == '.') c = ',';
    }
    std::string item;
    std::stringstream ss(normalized);
    while (std::getline(ss, item, ',')) {
        try {
            p.order.push_back(std::stoll(item) - 1);
        } catch (const std::exception&) {
            throw ArgumentError("invalid permutation entry: " + item);
        }
    }
    return p;
}

std::vector<Index> parse_dims(const std::string& text) {
    std::vector<Index> dims;
    std::string item;
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == 'x' || c == 'X') c = ',';
    }
    std::stringstream ss(normalized);
    while (std::getline(ss, item, ',')) {
        try {
            dims.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw ArgumentError("invalid dimension entry: " + item);
        }
    }
    return dims;
}

int run(int argc, char** argv) {
    CLI::App app{"orthogonal rank-1 tensor expansion toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    // decompose
    auto* cmd_decompose = app.add_subcommand(
        "decompose", "expand a tensor into sorted orthogonal rank-1 terms");
    std::optional<double> dec_eps;
    std::string dec_perm;
    cmd_decompose->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_decompose->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_decompose->add_option("--eps", dec_eps, "prune subtrees within this error budget");
    cmd_decompose->add_option("--perm", dec_perm, "1-based axis order, e.g. 2,3,1");

    // reconstruct
    auto* cmd_reconstruct =
        app.add_subcommand("reconstruct", "sum the first R terms of a decomposition");
    std::optional<Index> rec_rank;
    cmd_reconstruct->add_option("input", in_path, "decomposition JSON (default stdin)");
    cmd_reconstruct->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_reconstruct->add_option("--rank", rec_rank, "number of terms (default all)");

    // truncate
    auto* cmd_truncate =
        app.add_subcommand("truncate", "term count needed for a given tolerance");
    double trunc_eps = 0.0;
    cmd_truncate->add_option("input", in_path, "decomposition JSON (default stdin)");
    cmd_truncate->add_option("--eps", trunc_eps, "tolerance")->required();

    // tucker
    auto* cmd_tucker = app.add_subcommand("tucker", "convert kept terms to Tucker format");
    Index tucker_rank = 0;
    std::string tucker_terms;
    cmd_tucker->add_option("input", in_path, "decomposition JSON (default stdin)");
    cmd_tucker->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_tucker->add_option("--rank", tucker_rank, "keep the first R sorted terms");
    cmd_tucker->add_option("--terms", tucker_terms,
                           "1-based comma list of term indices (overrides --rank)");

    // complement
    auto* cmd_complement = app.add_subcommand(
        "complement", "orthonormal rank-1 basis of the space orthogonal to a 3-way tensor");
    cmd_complement->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_complement->add_option("-o,--output", out_path, "output path (default stdout)");

    // rank3
    auto* cmd_rank3 =
        app.add_subcommand("rank3", "express a 2x2x2 tensor as at most three rank-1 terms");
    cmd_rank3->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_rank3->add_option("-o,--output", out_path, "output path (default stdout)");

    // permscan
    auto* cmd_permscan =
        app.add_subcommand("permscan", "decompose under every axis order (CSV)");
    cmd_permscan->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_permscan->add_option("-o,--output", out_path, "output path (default stdout)");

    // deflate
    auto* cmd_deflate = app.add_subcommand(
        "deflate", "repeatedly subtract the largest rank-1 term (CSV)");
    Index defl_iters = 1;
    bool defl_cp = false;
    cmd_deflate->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_deflate->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_deflate->add_option("--iters", defl_iters, "number of subtractions")->required();
    cmd_deflate->add_flag("--with-cp", defl_cp, "also estimate the ALS rank per iteration");

    // perturb
    auto* cmd_perturb = app.add_subcommand(
        "perturb", "weight deviations under additive Gaussian noise (JSON report)");
    double pert_variance = 1e-6;
    std::uint64_t pert_seed = 1;
    cmd_perturb->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_perturb->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_perturb->add_option("--variance", pert_variance, "noise scale (default 1e-6)");
    cmd_perturb->add_option("--seed", pert_seed, "noise seed (default 1)");

    // cpals
    auto* cmd_cpals =
        app.add_subcommand("cpals", "alternating-least-squares baseline (CSV)");
    Index cp_rank = 1;
    Index cp_seeds = 10;
    Index cp_iters = 500;
    double cp_tol = 1e-10;
    cmd_cpals->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_cpals->add_option("-o,--output", out_path, "output path (default stdout)");
    cmd_cpals->add_option("--rank", cp_rank, "model rank")->required();
    cmd_cpals->add_option("--seeds", cp_seeds, "number of random starts (default 10)");
    cmd_cpals->add_option("--iters", cp_iters, "sweep budget (default 500)");
    cmd_cpals->add_option("--tol", cp_tol, "stop when the fit change drops below this");

    // trace
    auto* cmd_trace = app.add_subcommand(
        "trace", "running singular-value products along every branch (CSV)");
    cmd_trace->add_option("input", in_path, "tensor JSON (default stdin)");
    cmd_trace->add_option("-o,--output", out_path, "output path (default stdout)");

    // svcurve
    auto* cmd_svcurve =
        app.add_subcommand("svcurve", "sorted weights of a decomposition (CSV)");
    cmd_svcurve->add_option("input", in_path, "decomposition JSON (default stdin)");
    cmd_svcurve->add_option("-o,--output", out_path, "output path (default stdout)");

    // gen
    auto* cmd_gen = app.add_subcommand("gen", "built-in tensor generators");
    std::vector<std::string> gen_args;
    cmd_gen->add_option("spec", gen_args,
                        "running-example | inverse-sum n | gaussian dims seed")
        ->expected(-1);
    cmd_gen->add_option("-o,--output", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the diagnostic and usage hint
        return 1;
    }

    std::unique_ptr<std::ofstream> out_holder;

    if (*cmd_decompose) {
        const DenseTensor t = load_tensor(in_path);
        DecomposeOptions options;
        options.prune_eps = dec_eps;
        const IndexPermutation perm = dec_perm.empty()
                                          ? IndexPermutation::identity(t.order())
                                          : parse_permutation(dec_perm);
        const Decomposition dec = decompose(t, perm, options);
        write_decomposition_json(output_stream(out_holder, out_path), dec);
    } else if (*cmd_reconstruct) {
        const Decomposition dec = load_decomposition(in_path);
        write_tensor_json(output_stream(out_holder, out_path), reconstruct(dec, rec_rank));
    } else if (*cmd_truncate) {
        const Decomposition dec = load_decomposition(in_path);
        std::cout << "R = " << truncate_to_tolerance(dec, trunc_eps) << '\n';
    } else if (*cmd_tucker) {
        const Decomposition dec = load_decomposition(in_path);
        TuckerDecomposition td;
        if (!tucker_terms.empty()) {
            std::vector<Index> idx = parse_dims(tucker_terms);
            for (Index& i : idx) --i;
            td = to_tucker(dec, idx);
        } else {
            if (tucker_rank <= 0) {
                throw ArgumentError("tucker: provide --rank or --terms");
            }
            td = to_tucker(dec, tucker_rank);
        }
        write_tucker_json(output_stream(out_holder, out_path), td);
    } else if (*cmd_complement) {
        const DenseTensor t = load_tensor(in_path);
        const ComplementBasis basis = complement_basis(t);
        write_complement_json(output_stream(out_holder, out_path), basis, t.shape());
    } else if (*cmd_rank3) {
        const DenseTensor t = load_tensor(in_path);
        write_rank3_json(output_stream(out_holder, out_path), construct_rank3(t));
    } else if (*cmd_permscan) {
        const DenseTensor t = load_tensor(in_path);
        write_permscan_csv(output_stream(out_holder, out_path), permutation_scan(t));
    } else if (*cmd_deflate) {
        const DenseTensor t = load_tensor(in_path);
        write_deflation_csv(output_stream(out_holder, out_path),
                            deflation_experiment(t, defl_iters, defl_cp));
    } else if (*cmd_perturb) {
        const DenseTensor t = load_tensor(in_path);
        const DenseTensor e = gaussian_tensor(t.shape(), pert_seed, pert_variance);
        write_perturbation_json(output_stream(out_holder, out_path),
                                perturbation_report(t, e));
    } else if (*cmd_cpals) {
        const DenseTensor t = load_tensor(in_path);
        std::ostream& out = output_stream(out_holder, out_path);
        out << "seed,iterations,abs_error,rel_error\n";
        std::vector<double> errs;
        std::ostringstream ss;
        ss.precision(17);
        const double tnorm = frobenius_norm(t);
        for (Index seed = 1; seed <= cp_seeds; ++seed) {
            const CpDecomposition cp =
                cp_als(t, cp_rank, static_cast<std::uint64_t>(seed), cp_iters, cp_tol);
            const double err = cp_error(t, cp);
            errs.push_back(err);
            ss.str("");
            ss << err << ',' << (tnorm > 0 ? err / tnorm : err);
            out << seed << ',' << cp.fit_history.size() << ',' << ss.str() << '\n';
        }
        std::sort(errs.begin(), errs.end());
        ss.str("");
        ss << errs[errs.size() / 2];
        out << "median,," << ss.str() << ",\n";
    } else if (*cmd_trace) {
        const DenseTensor t = load_tensor(in_path);
        write_trace_csv(output_stream(out_holder, out_path), intermediate_product_trace(t));
    } else if (*cmd_svcurve) {
        const Decomposition dec = load_decomposition(in_path);
        write_curve_csv(output_stream(out_holder, out_path), sv_curve(dec));
    } else if (*cmd_gen) {
        if (gen_args.empty()) {
            throw ArgumentError("gen: missing generator name");
        }
        DenseTensor t;
        if (gen_args[0] == "running-example") {
            std::vector<double> data(24);
            for (std::size_t i = 0; i < 24; ++i) data[i] = static_cast<double>(i + 1);
            t = DenseTensor(Shape{3, 4, 2}, std::move(data));
        } else if (gen_args[0] == "inverse-sum") {
            if (gen_args.size() != 2) {
                throw ArgumentError("gen inverse-sum: expected the dimension n");
            }
            const Index n = std::stoll(gen_args[1]);
            t = DenseTensor::from_function(Shape{n, n, n}, [](std::span<const Index> i) {
                return 1.0 / static_cast<double>(i[0] + i[1] + i[2] + 3);
            });
        } else if (gen_args[0] == "gaussian") {
            if (gen_args.size() != 3) {
                throw ArgumentError("gen gaussian: expected dims and seed");
            }
            t = gaussian_tensor(Shape{parse_dims(gen_args[1])},
                                std::stoull(gen_args[2]));
        } else {
            throw ArgumentError("gen: unknown generator '" + gen_args[0] + "'");
        }
        write_tensor_json(output_stream(out_holder, out_path), t);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ttr1::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ttr1::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
