// Python bindings for the main operations: masks and norms, exact
// forward/affine-piece evaluation, region enumeration, matrix products
// and convergence experiments.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relulim/generators.hpp"
#include "relulim/io.hpp"
#include "relulim/lab.hpp"
#include "relulim/norms.hpp"
#include "relulim/products.hpp"
#include "relulim/regions.hpp"

namespace py = pybind11;
using namespace relulim;

namespace {

NormKind norm_arg(const std::string& s) { return norm_kind_from_string(s); }

SequenceSpec spec_from_dict(const py::dict& d) {
    return spec_from_json(json::parse(static_cast<std::string>(
        py::str(py::module_::import("json").attr("dumps")(d)))));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact piecewise-affine analysis and depth limits of ReLU networks";

    py::register_exception<ResourceLimitError>(m, "ResourceLimitError");
    py::register_exception<BoundaryProbeError>(m, "BoundaryProbeError");

    py::class_<ActivationMatrix>(m, "ActivationMatrix")
        .def(py::init([](const std::set<int>& support, int width) {
                 return make_activation_matrix(support, width);
             }),
             py::arg("support"), py::arg("width"))
        .def_property_readonly("width", &ActivationMatrix::width)
        .def_property_readonly("support", &ActivationMatrix::support)
        .def("dense", &ActivationMatrix::dense)
        .def("__eq__", [](const ActivationMatrix& a, const ActivationMatrix& b) { return a == b; })
        .def("__repr__", [](const ActivationMatrix& a) {
            std::string s = "ActivationMatrix(width=" + std::to_string(a.width()) + ", support={";
            bool first = true;
            for (int k : a.support()) {
                if (!first) s += ",";
                s += std::to_string(k);
                first = false;
            }
            return s + "})";
        });

    m.def("activation_product", &activation_product, py::arg("masks"));
    m.def(
        "vector_norm",
        [](const VectorXd& v, const std::string& p) { return vector_norm(v, norm_arg(p)); },
        py::arg("v"), py::arg("p") = "l2");
    m.def(
        "induced_matrix_norm",
        [](const MatrixXd& A, const std::string& p) { return induced_matrix_norm(A, norm_arg(p)); },
        py::arg("A"), py::arg("p") = "l2");

    py::class_<Network>(m, "Network")
        .def(py::init([](int input_dim, int width, const std::vector<std::pair<MatrixXd, VectorXd>>& layers) {
                 Network net;
                 net.input_dim = input_dim;
                 net.width = width;
                 for (const auto& [W, b] : layers) net.layers.push_back({W, b});
                 net.validate();
                 return net;
             }),
             py::arg("input_dim"), py::arg("width"), py::arg("layers"))
        .def_readonly("input_dim", &Network::input_dim)
        .def_readonly("width", &Network::width)
        .def_property_readonly("depth", &Network::depth)
        .def("to_json", [](const Network& net) { return network_to_json(net).dump(); })
        .def_static("from_json", [](const std::string& s) {
            return network_from_json(json::parse(s));
        });

    m.def(
        "forward",
        [](const Network& net, const VectorXd& x) {
            const ForwardResult fr = forward(net, x);
            std::vector<std::set<int>> pattern;
            for (const auto& mask : fr.pattern.layers) pattern.push_back(mask.support());
            return py::make_tuple(fr.value, pattern);
        },
        py::arg("net"), py::arg("x"));

    m.def(
        "affine_piece",
        [](const Network& net, const std::vector<std::set<int>>& supports) {
            std::vector<ActivationMatrix> masks;
            for (const auto& s : supports) masks.push_back(make_activation_matrix(s, net.width));
            const AffinePiece piece = affine_piece(net, ActivationPattern(masks));
            return py::make_tuple(piece.A, piece.c);
        },
        py::arg("net"), py::arg("pattern"));

    m.def("representation_check", &representation_check, py::arg("net"), py::arg("samples"));
    m.def("zaslavsky_bound", &zaslavsky_bound, py::arg("m"), py::arg("d"));

    m.def(
        "enumerate_regions",
        [](const Network& net, int depth) {
            const auto cells = enumerate_regions(net, depth <= 0 ? net.depth() : depth);
            py::list out;
            for (const auto& cell : cells) {
                py::dict c;
                std::vector<std::set<int>> pattern;
                for (const auto& mask : cell.pattern.layers) pattern.push_back(mask.support());
                c["pattern"] = pattern;
                c["A"] = cell.piece.A;
                c["c"] = cell.piece.c;
                c["witness"] = cell.witness;
                c["slack"] = cell.slack;
                out.append(std::move(c));
            }
            return out;
        },
        py::arg("net"), py::arg("depth") = 0);

    m.def("verify_tail_lemma",
          [](const std::vector<double>& a, int p) {
              const auto r = verify_tail_lemma(a, p);
              return py::make_tuple(r.lhs, r.rhs, r.holds);
          },
          py::arg("a"), py::arg("p"));
    m.def("tail_bound",
          [](const std::vector<double>& pnorms, int cut) { return tail_bound(pnorms, cut); },
          py::arg("pnorms"), py::arg("cut"));
    m.def("stabilization_index",
          [](const std::vector<std::set<int>>& supports, int width) {
              std::vector<ActivationMatrix> masks;
              for (const auto& s : supports) masks.push_back(make_activation_matrix(s, width));
              const auto r = stabilization_index(masks);
              return py::make_tuple(r.index, r.final_mask.support());
          },
          py::arg("supports"), py::arg("width"));

    m.def(
        "generate_sequence",
        [](const py::dict& spec, int depth) { return generate_sequence(spec_from_dict(spec), depth); },
        py::arg("spec"), py::arg("depth"));

    m.def(
        "product_limit",
        [](const py::dict& spec, const std::string& masks, const std::string& p, double tol,
           int n_max) {
            const SequenceSpec s = spec_from_dict(spec);
            MaskRule rule = masks == "random" ? random_masks(s.width, s.seed)
                                              : identity_masks(s.width);
            const auto r = product_limit(s, rule, norm_arg(p), tol, n_max);
            return py::make_tuple(r.value, to_string(r.status));
        },
        py::arg("spec"), py::arg("masks") = "identity", py::arg("p") = "l1",
        py::arg("tol") = 1e-6, py::arg("n_max") = 500);

    m.def(
        "series_limit",
        [](const py::dict& spec, const std::string& masks, const std::string& p, double tol,
           int n_max) {
            const SequenceSpec s = spec_from_dict(spec);
            MaskRule rule = masks == "random" ? random_masks(s.width, s.seed)
                                              : identity_masks(s.width);
            const auto r = series_limit(s, rule, norm_arg(p), tol, n_max);
            return py::make_tuple(r.value, to_string(r.status));
        },
        py::arg("spec"), py::arg("masks") = "identity", py::arg("p") = "l1",
        py::arg("tol") = 1e-6, py::arg("n_max") = 500);

    m.def(
        "pointwise_experiment",
        [](const py::dict& spec, const std::vector<int>& depths, double tol, const std::string& p) {
            const SequenceSpec s = spec_from_dict(spec);
            const auto report = pointwise_experiment(s, default_grid(s.input_dim), depths, tol,
                                                     norm_arg(p));
            py::dict out;
            out["depths"] = report.depths;
            out["delta_sup"] = report.delta_sup;
            out["lp_estimate"] = report.lp_estimate;
            out["verdict"] = to_string(report.verdict);
            return out;
        },
        py::arg("spec"), py::arg("depths"), py::arg("tol") = 1e-6, py::arg("p") = "linf");

    m.def(
        "lp_distance_estimate",
        [](const py::dict& spec, int n, int n_prime, const std::string& p, int samples,
           std::uint64_t seed) {
            return lp_distance_estimate(spec_from_dict(spec), n, n_prime, norm_arg(p), samples,
                                        seed);
        },
        py::arg("spec"), py::arg("n"), py::arg("n_prime"), py::arg("p") = "linf",
        py::arg("samples") = 1000, py::arg("seed") = 0);
}
