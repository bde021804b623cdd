#include "gcon/sensitivity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gcon {

double sensitivity_bound_single(double alpha, Step m) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1]");
    if (m == 0) return 0.0;
    const double base = 2.0 * (1.0 - alpha) / alpha;
    if (m == kInfiniteSteps) return base;
    return base * (1.0 - std::pow(1.0 - alpha, m));
}

double sensitivity_bound(const PropagationConfig& cfg) {
    cfg.validate();
    double acc = 0.0;
    for (Step m : cfg.steps) acc += sensitivity_bound_single(cfg.alpha, m);
    return acc / cfg.s();
}

SensitivityReport empirical_sensitivity(const Graph& g, const PropagationConfig& cfg,
                                        const Matrix& X_normalized, int max_nodes,
                                        double clip_p) {
    cfg.validate();
    if (g.n() > max_nodes)
        throw std::invalid_argument("graph too large for neighbor enumeration");

    const Matrix Z = aggregate(normalize_adjacency(g, clip_p), X_normalized, cfg).Z;

    SensitivityReport report;
    report.bound = sensitivity_bound(cfg);
    report.config = cfg;

    const auto edits = neighboring_edits(g);
    const auto neighbors = neighboring_graphs(g);
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
        const Matrix Zp =
            aggregate(normalize_adjacency(neighbors[k], clip_p), X_normalized, cfg).Z;
        double psi = 0.0;
        for (int i = 0; i < g.n(); ++i)
            psi += (Zp.row(i) - Z.row(i)).norm();
        report.per_neighbor.push_back({edits[k].edge, edits[k].removed, psi});
        report.empirical_max = std::max(report.empirical_max, psi);
        if (edits[k].removed)
            report.empirical_max_removal = std::max(report.empirical_max_removal, psi);
    }
    return report;
}

std::string SensitivityReport::to_text() const {
    std::ostringstream os;
    os.precision(12);
    os << "# sensitivity audit\n";
    os << "alpha\t" << config.alpha << "\n";
    os << "steps\t";
    for (int i = 0; i < config.s(); ++i) {
        if (i) os << ",";
        if (config.steps[i] == kInfiniteSteps) os << "inf";
        else os << config.steps[i];
    }
    os << "\n";
    os << "bound\t" << bound << "\n";
    os << "empirical_max\t" << empirical_max << "\n";
    os << "empirical_max_removal\t" << empirical_max_removal << "\n";
    os << "# edge_u\tedge_v\tdirection\tpsi\tbound\tslack\n";
    for (const auto& r : per_neighbor) {
        os << r.edge.first << "\t" << r.edge.second << "\t"
           << (r.removed ? "remove" : "add") << "\t" << r.psi << "\t" << bound
           << "\t" << (bound - r.psi) << "\n";
    }
    return os.str();
}

} // namespace gcon
