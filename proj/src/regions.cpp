#include "relulim/regions.hpp"

#include <algorithm>
#include <map>

namespace relulim {

long long zaslavsky_bound(int m, int d) {
    if (m < 1 || d < 1) throw std::invalid_argument("zaslavsky_bound: m, d must be >= 1");
    long long total = 0;
    const int top = std::min(m, d);
    for (int k = 0; k <= top; ++k) {
        long long c = 1;
        for (int i = 1; i <= k; ++i) c = c * (m - i + 1) / i;
        total += c;
    }
    return total;
}

namespace {

struct Frontier {
    std::vector<ActivationMatrix> masks;  // completed layers
    std::vector<HalfSpace> constraints;
    MatrixXd A;  // input -> current hidden state, masked
    VectorXd c;
    InteriorCertificate cert;
};

class Enumerator {
public:
    Enumerator(const Network& net, int depth) : net_(net), depth_(depth) {}

    std::vector<RegionCell> run() {
        Frontier root;
        root.A = MatrixXd::Identity(net_.input_dim, net_.input_dim);
        root.c = VectorXd::Zero(net_.input_dim);
        root.cert.slack = 1.0;
        descend_layer(root, 0);
        std::sort(cells_.begin(), cells_.end(),
                  [](const RegionCell& a, const RegionCell& b) { return a.pattern < b.pattern; });
        return std::move(cells_);
    }

private:
    void descend_layer(Frontier& f, int layer) {
        if (layer == depth_) {
            emit(f);
            return;
        }
        const auto& l = net_.layers[layer];
        const MatrixXd rows = l.W * f.A;
        const VectorXd offs = l.W * f.c + l.b;
        branch_rows(f, layer, rows, offs, 0, 0);
    }

    void branch_rows(Frontier& f, int layer, const MatrixXd& rows, const VectorXd& offs, int j,
                     std::uint64_t bits) {
        const int m = net_.width;
        if (j == m) {
            const ActivationMatrix mask(m, bits);
            Frontier next = f;
            next.masks.push_back(mask);
            next.A = mask.apply(rows);
            next.c = mask.apply(offs);
            descend_layer(next, layer + 1);
            return;
        }
        // activated branch first, then deactivated
        for (const bool active : {true, false}) {
            // strict rows read a.x + beta > 0, non-strict ones a.x + beta <= 0,
            // both over the raw row data
            HalfSpace h;
            h.strict = active;
            h.normal = rows.row(j);
            h.offset = offs(j);
            f.constraints.push_back(h);
            InteriorCertificate cert;
            try {
                cert = certify_interior(f.constraints, net_.input_dim);
            } catch (const std::runtime_error& e) {
                throw std::runtime_error(std::string("region enumeration: LP failure at pattern prefix ") +
                                         prefix_string(f, j, bits, active) + ": " + e.what());
            }
            if (cert.feasible && cert.slack >= kInteriorSlack) {
                InteriorCertificate saved = f.cert;
                f.cert = cert;
                branch_rows(f, layer, rows, offs, j + 1, active ? (bits | (std::uint64_t{1} << j)) : bits);
                f.cert = saved;
            }
            f.constraints.pop_back();
        }
    }

    std::string prefix_string(const Frontier& f, int j, std::uint64_t bits, bool active) const {
        std::string s;
        for (const auto& mk : f.masks) s += std::to_string(mk.bits()) + ".";
        s += std::to_string(bits | (active ? (std::uint64_t{1} << j) : 0)) + "@" + std::to_string(j);
        return s;
    }

    void emit(const Frontier& f) {
        RegionCell cell;
        cell.pattern = ActivationPattern(f.masks);
        cell.polyhedron.constraints = f.constraints;
        Network prefix = net_;
        prefix.layers.resize(depth_);
        prefix.output_layer.reset();
        cell.piece = affine_piece(prefix, cell.pattern);
        cell.witness = f.cert.witness;
        cell.slack = f.cert.slack;
        cells_.push_back(std::move(cell));
    }

    const Network& net_;
    int depth_;
    std::vector<RegionCell> cells_;
};

}  // namespace

std::vector<RegionCell> enumerate_regions(const Network& net, int depth) {
    net.validate();
    if (depth < 1 || depth > net.depth())
        throw std::invalid_argument("enumerate_regions: depth out of range");
    if (net.input_dim > kMaxEnumDim || net.width > kMaxEnumWidth || depth > kMaxEnumDepth)
        throw ResourceLimitError("enumerate_regions: guardrail exceeded (d <= 3, m <= 8, depth <= 6)");
    return Enumerator(net, depth).run();
}

std::vector<RegionCell> enumerate_regions(const Network& net) {
    return enumerate_regions(net, net.depth());
}

PartitionReport verify_partition(const std::vector<RegionCell>& cells, const Network& net,
                                 const std::vector<VectorXd>& samples) {
    std::map<ActivationPattern, int> index;
    for (std::size_t i = 0; i < cells.size(); ++i) index[cells[i].pattern] = static_cast<int>(i);
    PartitionReport report;
    for (const auto& x : samples) {
        double margin = 0.0;
        const ForwardResult fr = forward_with_margin(net, x, margin);
        if (margin < kInteriorSlack) {
            ++report.boundary;
        } else if (index.count(fr.pattern)) {
            ++report.matched;
        } else {
            ++report.orphaned;
        }
    }
    return report;
}

namespace {

bool satisfies(const Polyhedron& poly, const VectorXd& x) {
    for (const auto& h : poly.constraints) {
        const double v = h.normal.dot(x) + h.offset;
        if (h.strict ? (v <= 0.0) : (v > 1e-12)) return false;
    }
    return true;
}

}  // namespace

bool check_nested(const Network& net) {
    if (net.depth() < 2) throw std::invalid_argument("check_nested: depth must be >= 2");
    std::vector<std::vector<RegionCell>> by_depth;
    for (int k = 1; k <= net.depth(); ++k) by_depth.push_back(enumerate_regions(net, k));
    for (int k = 1; k < net.depth(); ++k) {
        std::map<ActivationPattern, const RegionCell*> shallow;
        for (const auto& cell : by_depth[k - 1]) shallow[cell.pattern] = &cell;
        for (const auto& deep : by_depth[k]) {
            ActivationPattern prefix(std::vector<ActivationMatrix>(
                deep.pattern.layers.begin(), deep.pattern.layers.begin() + k));
            auto it = shallow.find(prefix);
            if (it == shallow.end()) return false;
            const RegionCell& parent = *it->second;
            const auto& pc = parent.polyhedron.constraints;
            const auto& dc = deep.polyhedron.constraints;
            if (pc.size() > dc.size()) return false;
            for (std::size_t i = 0; i < pc.size(); ++i) {
                if (pc[i].strict != dc[i].strict || pc[i].offset != dc[i].offset ||
                    pc[i].normal != dc[i].normal)
                    return false;
            }
            if (!satisfies(parent.polyhedron, deep.witness)) return false;
        }
    }
    return true;
}

}  // namespace relulim
