#include "gcon/dataset_io.hpp"
#include "gcon/rng.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gcon {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& file, int line, const std::string& what) {
    throw std::invalid_argument(file + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, '\t')) out.push_back(field);
    return out;
}

int parse_id(const std::string& s, int n, const std::string& file, int line) {
    int v;
    try {
        size_t pos;
        v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
        fail(file, line, "not an integer id: '" + s + "'");
    }
    if (v < 0 || v >= n)
        fail(file, line, "node id " + std::to_string(v) + " out of range [0, "
                             + std::to_string(n) + ")");
    return v;
}

std::vector<std::string> read_lines(const fs::path& p, bool required) {
    std::ifstream is(p);
    if (!is) {
        if (required) throw std::invalid_argument("missing file: " + p.string());
        return {};
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

} // namespace

Graph load_dataset(const std::string& dir) {
    const fs::path root(dir);

    // features.tsv fixes n and d0.
    const auto feat_lines = read_lines(root / "features.tsv", true);
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < feat_lines.size(); ++i) {
        if (feat_lines[i].empty()) continue;
        const auto fields = split_tabs(feat_lines[i]);
        std::vector<double> row;
        for (const auto& f : fields) {
            try {
                size_t pos;
                row.push_back(std::stod(f, &pos));
                if (pos != f.size()) throw std::invalid_argument(f);
            } catch (const std::exception&) {
                fail("features.tsv", static_cast<int>(i + 1),
                     "not a number: '" + f + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            fail("features.tsv", static_cast<int>(i + 1),
                 "row width " + std::to_string(row.size()) + " differs from first row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("features.tsv has no rows");
    const int n = static_cast<int>(rows.size());
    const int d0 = static_cast<int>(rows.front().size());
    Matrix X(n, d0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d0; ++j) X(i, j) = rows[i][j];

    const auto edge_lines = read_lines(root / "edges.tsv", true);
    std::vector<Edge> edges;
    std::map<Edge, int> seen; // edge -> first line number
    for (size_t i = 0; i < edge_lines.size(); ++i) {
        if (edge_lines[i].empty()) continue;
        const int line = static_cast<int>(i + 1);
        const auto fields = split_tabs(edge_lines[i]);
        if (fields.size() != 2) fail("edges.tsv", line, "expected 'src<TAB>dst'");
        const int u = parse_id(fields[0], n, "edges.tsv", line);
        const int v = parse_id(fields[1], n, "edges.tsv", line);
        if (u == v) fail("edges.tsv", line, "self-loop on node " + std::to_string(u));
        const Edge e{std::min(u, v), std::max(u, v)};
        const auto [it, fresh] = seen.emplace(e, line);
        if (!fresh)
            fail("edges.tsv", line, "duplicate of edge first listed on line "
                                        + std::to_string(it->second));
        edges.push_back(e);
    }

    const auto label_lines = read_lines(root / "labels.tsv", false);
    std::vector<int> labels(n, -1);
    int num_classes = 0;
    for (size_t i = 0; i < label_lines.size(); ++i) {
        if (label_lines[i].empty()) continue;
        const int line = static_cast<int>(i + 1);
        const auto fields = split_tabs(label_lines[i]);
        if (fields.size() != 2) fail("labels.tsv", line, "expected 'id<TAB>class'");
        const int id = parse_id(fields[0], n, "labels.tsv", line);
        int cls;
        try {
            size_t pos;
            cls = std::stoi(fields[1], &pos);
            if (pos != fields[1].size() || cls < 0) throw std::invalid_argument(fields[1]);
        } catch (const std::exception&) {
            fail("labels.tsv", line, "not a class index: '" + fields[1] + "'");
        }
        if (labels[id] != -1)
            fail("labels.tsv", line, "node " + std::to_string(id) + " labeled twice");
        labels[id] = cls;
        num_classes = std::max(num_classes, cls + 1);
    }
    Matrix Y = Matrix::Zero(n, std::max(num_classes, 1));
    for (int i = 0; i < n; ++i)
        if (labels[i] >= 0) Y(i, labels[i]) = 1.0;

    const auto split_lines = read_lines(root / "split.tsv", false);
    std::vector<Split> split(n, Split::Unlabeled);
    for (size_t i = 0; i < split_lines.size(); ++i) {
        if (split_lines[i].empty()) continue;
        const int line = static_cast<int>(i + 1);
        const auto fields = split_tabs(split_lines[i]);
        if (fields.size() != 2)
            fail("split.tsv", line, "expected 'id<TAB>{train|val|test}'");
        const int id = parse_id(fields[0], n, "split.tsv", line);
        if (split[id] != Split::Unlabeled)
            fail("split.tsv", line, "node " + std::to_string(id) + " assigned twice");
        if (fields[1] == "train") split[id] = Split::Train;
        else if (fields[1] == "val") split[id] = Split::Val;
        else if (fields[1] == "test") split[id] = Split::Test;
        else fail("split.tsv", line, "unknown split tag '" + fields[1] + "'");
        if (labels[id] < 0)
            fail("split.tsv", line, "node " + std::to_string(id) + " is in the split "
                                        "but has no label");
    }

    return Graph(n, std::move(edges), std::move(X), std::move(Y), std::move(split));
}

void save_dataset(const std::string& dir, const Graph& g) {
    const fs::path root(dir);
    fs::create_directories(root);

    {
        std::ofstream os(root / "edges.tsv");
        for (const auto& [u, v] : g.edges()) os << u << '\t' << v << '\n';
    }
    {
        std::ofstream os(root / "features.tsv");
        os.precision(17);
        for (int i = 0; i < g.n(); ++i) {
            for (int j = 0; j < g.feature_dim(); ++j) {
                if (j) os << '\t';
                os << g.X()(i, j);
            }
            os << '\n';
        }
    }
    {
        std::ofstream os(root / "labels.tsv");
        for (int i = 0; i < g.n(); ++i)
            for (int j = 0; j < g.num_classes(); ++j)
                if (g.Y()(i, j) == 1.0) os << i << '\t' << j << '\n';
    }
    {
        std::ofstream os(root / "split.tsv");
        for (int i = 0; i < g.n(); ++i) {
            switch (g.split()[i]) {
                case Split::Train: os << i << "\ttrain\n"; break;
                case Split::Val: os << i << "\tval\n"; break;
                case Split::Test: os << i << "\ttest\n"; break;
                case Split::Unlabeled: break;
            }
        }
    }
}

void SyntheticSpec::validate() const {
    if (classes < 1) throw std::invalid_argument("classes must be positive");
    if (n < classes) throw std::invalid_argument("n must be at least classes");
    if (!(p_intra >= 0.0 && p_intra <= 1.0))
        throw std::invalid_argument("intra-class edge probability must lie in [0, 1]");
    if (!(p_inter >= 0.0 && p_inter <= 1.0))
        throw std::invalid_argument("inter-class edge probability must lie in [0, 1]");
    if (feature_dim < 1) throw std::invalid_argument("feature_dim must be positive");
    if (noise < 0.0) throw std::invalid_argument("noise must be nonnegative");
}

Graph generate_sbm(const SyntheticSpec& spec) {
    spec.validate();
    Rng root(spec.seed);

    std::vector<int> cls(spec.n);
    for (int i = 0; i < spec.n; ++i) cls[i] = i % spec.classes;

    // Class means: random unit vectors, shared across both kinds; blobs get
    // looser (non-unit) means but the same construction works at desk scale.
    Rng mean_rng = root.child(0x6d65616eULL);
    Matrix means(spec.classes, spec.feature_dim);
    for (int k = 0; k < spec.classes; ++k) {
        for (int j = 0; j < spec.feature_dim; ++j) means(k, j) = mean_rng.normal();
        means.row(k).normalize();
    }

    Rng feat_rng = root.child(0x66656174ULL);
    Matrix X(spec.n, spec.feature_dim);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.feature_dim; ++j)
            X(i, j) = means(cls[i], j) + spec.noise * feat_rng.normal();

    Rng edge_rng = root.child(0x65646765ULL);
    std::vector<Edge> edges;
    for (int u = 0; u < spec.n; ++u)
        for (int v = u + 1; v < spec.n; ++v) {
            const double p = cls[u] == cls[v] ? spec.p_intra : spec.p_inter;
            if (edge_rng.uniform() < p) edges.emplace_back(u, v);
        }

    Matrix Y = Matrix::Zero(spec.n, spec.classes);
    for (int i = 0; i < spec.n; ++i) Y(i, cls[i]) = 1.0;

    return Graph(spec.n, std::move(edges), std::move(X), std::move(Y),
                 std::vector<Split>(spec.n, Split::Unlabeled));
}

Graph make_split(const Graph& g, int per_class_train, int val_count,
                 int test_count, std::uint64_t seed) {
    if (per_class_train < 0 || val_count < 0 || test_count < 0)
        throw std::invalid_argument("split counts must be nonnegative");

    const int c = g.num_classes();
    std::vector<std::vector<int>> by_class(c);
    std::vector<int> rest;
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < c; ++j)
            if (g.Y()(i, j) == 1.0) { by_class[j].push_back(i); break; }
    }

    Rng rng = Rng(seed).child(0x73706c6974ULL);
    const auto shuffle = [&](std::vector<int>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
            std::swap(v[i], v[rng.below(i + 1)]);
    };

    std::vector<Split> split(g.n(), Split::Unlabeled);
    for (int k = 0; k < c; ++k) {
        if (static_cast<int>(by_class[k].size()) < per_class_train)
            throw std::invalid_argument("class " + std::to_string(k)
                                        + " has fewer labeled nodes than per_class_train");
        shuffle(by_class[k]);
        for (int i = 0; i < per_class_train; ++i) split[by_class[k][i]] = Split::Train;
        for (size_t i = per_class_train; i < by_class[k].size(); ++i)
            rest.push_back(by_class[k][i]);
    }
    if (static_cast<int>(rest.size()) < val_count + test_count)
        throw std::invalid_argument("not enough labeled nodes left for val + test");
    shuffle(rest);
    for (int i = 0; i < val_count; ++i) split[rest[i]] = Split::Val;
    for (int i = 0; i < test_count; ++i) split[rest[val_count + i]] = Split::Test;

    std::vector<Edge> edges = g.edges();
    return Graph(g.n(), std::move(edges), g.X(), g.Y(), std::move(split));
}

} // namespace gcon
