#include "relulim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace relulim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json matrix_to_json(const MatrixXd& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a nested array matrix");
    const auto rows = j.size();
    const auto cols = j.front().size();
    MatrixXd M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t k = 0; k < cols; ++k) M(i, k) = j[i][k].get<double>();
    }
    return M;
}

json vector_to_json(const VectorXd& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

VectorXd vector_from_json(const json& j) {
    VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

json column_to_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) {
        if (std::isnan(x))
            a.push_back(nullptr);
        else
            a.push_back(x);
    }
    return a;
}

}  // namespace

json network_to_json(const Network& net) {
    json j;
    j["input_dim"] = net.input_dim;
    j["width"] = net.width;
    j["layers"] = json::array();
    for (const auto& l : net.layers)
        j["layers"].push_back({{"W", matrix_to_json(l.W)}, {"b", vector_to_json(l.b)}});
    if (net.output_layer)
        j["output_layer"] = {{"W", matrix_to_json(net.output_layer->W)},
                             {"b", vector_to_json(net.output_layer->b)}};
    return j;
}

Network network_from_json(const json& j) {
    Network net;
    net.input_dim = j.at("input_dim").get<int>();
    net.width = j.at("width").get<int>();
    for (const auto& l : j.at("layers"))
        net.layers.push_back({matrix_from_json(l.at("W")), vector_from_json(l.at("b"))});
    if (j.contains("output_layer") && !j["output_layer"].is_null())
        net.output_layer = Layer{matrix_from_json(j["output_layer"].at("W")),
                                 vector_from_json(j["output_layer"].at("b"))};
    net.validate();
    return net;
}

namespace {

std::string kind_to_string(SequenceKind k) {
    switch (k) {
        case SequenceKind::IdentityPerturbation: return "identity_perturbation";
        case SequenceKind::Constant: return "constant";
        case SequenceKind::ResnetLike: return "resnet_like";
        case SequenceKind::Explicit: return "explicit";
    }
    return "identity_perturbation";
}

SequenceKind kind_from_string(const std::string& s) {
    if (s == "identity_perturbation") return SequenceKind::IdentityPerturbation;
    if (s == "constant") return SequenceKind::Constant;
    if (s == "resnet_like") return SequenceKind::ResnetLike;
    if (s == "explicit") return SequenceKind::Explicit;
    throw std::invalid_argument("unknown sequence kind: " + s);
}

}  // namespace

json spec_to_json(const SequenceSpec& spec) {
    json params;
    params["width"] = spec.width;
    params["input_dim"] = spec.input_dim;
    switch (spec.kind) {
        case SequenceKind::IdentityPerturbation:
        case SequenceKind::ResnetLike:
            params["alpha"] = spec.alpha;
            params["scale"] = spec.scale;
            params["bias_alpha"] = spec.bias_alpha;
            params["bias_scale"] = spec.bias_scale;
            params["dist"] = spec.dist == PerturbationDist::DenseUniform ? "dense-uniform"
                                                                         : "sparse-one-entry";
            params["bias_sign"] = spec.bias_sign == BiasSign::Random ? "random" : "positive";
            params["norm"] = to_string(spec.norm);
            break;
        case SequenceKind::Constant:
            params["W"] = matrix_to_json(spec.constant_W);
            params["b"] = vector_to_json(spec.constant_b);
            break;
        case SequenceKind::Explicit:
            params["network"] = network_to_json(*spec.explicit_net);
            break;
    }
    json j;
    j["kind"] = kind_to_string(spec.kind);
    j["params"] = std::move(params);
    j["seed"] = spec.seed;
    return j;
}

SequenceSpec spec_from_json(const json& j) {
    SequenceSpec spec;
    spec.kind = kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    const json& params = j.at("params");
    spec.width = params.at("width").get<int>();
    spec.input_dim = params.at("input_dim").get<int>();
    switch (spec.kind) {
        case SequenceKind::IdentityPerturbation:
        case SequenceKind::ResnetLike: {
            spec.alpha = params.at("alpha").get<double>();
            spec.scale = params.at("scale").get<double>();
            spec.bias_alpha = params.value("bias_alpha", 2.0);
            spec.bias_scale = params.value("bias_scale", 0.0);
            const std::string dist = params.value("dist", std::string("dense-uniform"));
            if (dist == "dense-uniform")
                spec.dist = PerturbationDist::DenseUniform;
            else if (dist == "sparse-one-entry")
                spec.dist = PerturbationDist::SparseOneEntry;
            else
                throw std::invalid_argument("unknown perturbation dist: " + dist);
            const std::string sign = params.value("bias_sign", std::string("random"));
            if (sign == "random")
                spec.bias_sign = BiasSign::Random;
            else if (sign == "positive")
                spec.bias_sign = BiasSign::Positive;
            else
                throw std::invalid_argument("unknown bias_sign: " + sign);
            spec.norm = norm_kind_from_string(params.value("norm", std::string("l1")));
            break;
        }
        case SequenceKind::Constant:
            spec.constant_W = matrix_from_json(params.at("W"));
            spec.constant_b = vector_from_json(params.at("b"));
            break;
        case SequenceKind::Explicit:
            spec.explicit_net = network_from_json(params.at("network"));
            break;
    }
    spec.validate();
    return spec;
}

json cells_to_json(const std::vector<RegionCell>& cells) {
    json arr = json::array();
    for (const auto& cell : cells) {
        json c;
        json pattern = json::array();
        for (const auto& mask : cell.pattern.layers) {
            json support = json::array();
            for (int k : mask.support()) support.push_back(k);
            pattern.push_back(std::move(support));
        }
        c["pattern"] = std::move(pattern);
        json cons = json::array();
        for (const auto& h : cell.polyhedron.constraints)
            cons.push_back({{"normal", vector_to_json(h.normal)},
                            {"offset", h.offset},
                            {"strict", h.strict}});
        c["polyhedron"] = std::move(cons);
        c["piece"] = {{"A", matrix_to_json(cell.piece.A)}, {"c", vector_to_json(cell.piece.c)}};
        c["witness"] = vector_to_json(cell.witness);
        c["slack"] = cell.slack;
        arr.push_back(std::move(c));
    }
    return arr;
}

json report_to_json(const ConvergenceReport& report) {
    json j;
    j["grid_size"] = report.grid_size;
    j["input_dim"] = report.input_dim;
    j["depths"] = report.depths;
    j["delta_sup"] = column_to_json(report.delta_sup);
    j["lp_estimate"] = column_to_json(report.lp_estimate);
    j["w_dist_identity"] = column_to_json(report.w_dist_identity);
    j["b_norm"] = column_to_json(report.b_norm);
    j["tail_bound"] = column_to_json(report.tail_bound_col);
    j["verdict"] = to_string(report.verdict);
    j["conditions"] = {
        {"summable", to_string(report.conditions.summable)},
        {"small_tail", to_string(report.conditions.small_tail)},
        {"bias_summable", to_string(report.conditions.bias_summable)},
        {"sup_bnorm", report.conditions.sup_bnorm},
        {"sum_bnorm", report.conditions.sum_bnorm},
    };
    if (!report.limit_snapshot.empty()) {
        json snap = json::array();
        for (const auto& v : report.limit_snapshot) snap.push_back(vector_to_json(v));
        j["limit_snapshot"] = std::move(snap);
    }
    return j;
}

json audit_to_json(const AuditReport& report) {
    json j;
    j["w_dist"] = column_to_json(report.w_dist);
    j["b_norm"] = column_to_json(report.b_norm);
    j["weight_pass"] = report.weight_pass;
    j["bias_pass"] = report.bias_pass;
    return j;
}

std::string report_to_csv(const ConvergenceReport& report) {
    std::ostringstream out;
    out << "n,delta_sup,lp_estimate,w_dist_identity,b_norm,tail_bound\n";
    for (std::size_t i = 0; i < report.depths.size() && i < report.delta_sup.size(); ++i) {
        out << report.depths[i] << ',' << format_double(report.delta_sup[i]) << ','
            << format_double(report.lp_estimate[i]) << ','
            << format_double(report.w_dist_identity[i]) << ','
            << format_double(report.b_norm[i]) << ','
            << format_double(report.tail_bound_col[i]) << '\n';
    }
    return out.str();
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path.string());
    json j;
    in >> j;
    return network_from_json(j);
}

SequenceSpec load_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path.string());
    json j;
    in >> j;
    return spec_from_json(j);
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace relulim
