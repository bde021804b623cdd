#include "gcon/artifact.hpp"
#include "gcon/dataset_io.hpp"
#include "gcon/errors.hpp"
#include "gcon/inference.hpp"
#include "gcon/sensitivity.hpp"
#include "gcon/trainer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gcon;

namespace {

// Exit-code taxonomy: 0 ok, 2 validation, 3 convergence, 4 calibration,
// 5 audit violation, 1 internal.
constexpr int kOk = 0, kInternal = 1, kValidation = 2, kConvergence = 3,
              kCalibration = 4, kAuditViolation = 5;

std::string fnv1a_digest(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot read file for digest: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        const auto got = is.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!is) break;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

using Config = std::map<std::string, std::string>;

Config load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno)
                                        + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

double parse_double(const Config& cfg, const std::string& key) {
    const std::string& s = cfg.at(key);
    try {
        size_t pos;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("--" + key + ": not a number: '" + s + "'");
    }
}

long parse_int(const Config& cfg, const std::string& key) {
    const std::string& s = cfg.at(key);
    try {
        size_t pos;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("--" + key + ": not an integer: '" + s + "'");
    }
}

std::uint64_t parse_seed(const Config& cfg, const std::string& key) {
    const std::string& s = cfg.at(key);
    try {
        size_t pos;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("--" + key + ": not a seed: '" + s + "'");
    }
}

std::vector<Step> parse_steps(const std::string& s) {
    std::vector<Step> steps;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok == "inf") {
            steps.push_back(kInfiniteSteps);
            continue;
        }
        try {
            size_t pos;
            const int m = std::stoi(tok, &pos);
            if (pos != tok.size() || m < 0) throw std::invalid_argument(tok);
            steps.push_back(m);
        } catch (const std::exception&) {
            throw std::invalid_argument("--steps: expected nonnegative integer or "
                                        "'inf', got '" + tok + "'");
        }
    }
    if (steps.empty()) throw std::invalid_argument("--steps: empty list");
    return steps;
}

bool parse_on_off(const Config& cfg, const std::string& key) {
    const std::string& s = cfg.at(key);
    if (s == "on") return true;
    if (s == "off") return false;
    throw std::invalid_argument("--" + key + ": expected 'on' or 'off', got '"
                                + s + "'");
}

// defaults < config file < flags.
Config resolve(Config defaults, const std::string& config_path,
               const Config& flag_values) {
    if (!config_path.empty()) {
        for (auto& [k, v] : load_config_file(config_path)) {
            if (!defaults.count(k))
                throw std::invalid_argument("config file: unknown key '" + k + "'");
            defaults[k] = v;
        }
    }
    for (const auto& [k, v] : flag_values) defaults[k] = v;
    return defaults;
}

struct ManifestWriter {
    std::string subcommand;
    Config config;
    std::uint64_t seed = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const fs::path& out_dir) const {
        json m;
        m["subcommand"] = subcommand;
        m["config"] = config;
        m["seed"] = seed;
        m["inputs"] = json::array();
        for (const auto& p : inputs)
            if (fs::exists(p))
                m["inputs"].push_back({{"path", p}, {"digest", fnv1a_digest(p)}});
        m["outputs"] = json::array();
        for (const auto& p : outputs)
            m["outputs"].push_back({{"path", p}, {"digest", fnv1a_digest(p)}});
        m["wall_clock_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::ofstream os(out_dir / "manifest.json");
        os << m.dump(2) << "\n";
    }
};

std::vector<std::string> dataset_files(const std::string& dir) {
    std::vector<std::string> out;
    for (const char* f : {"edges.tsv", "features.tsv", "labels.tsv", "split.tsv"})
        out.push_back((fs::path(dir) / f).string());
    return out;
}

int cmd_train(const std::string& dataset, const std::string& out_dir,
              const std::string& config_path, const Config& flags) {
    Config defaults = {
        {"seed", "1"},        {"epsilon", "1"},     {"delta", "0.001"},
        {"omega", "0.9"},     {"alpha", "0.5"},     {"steps", "2"},
        {"lambda", "1"},      {"xi", "0.001"},      {"clip-p", "0.5"},
        {"loss", "mlsm"},     {"delta-l", "0.5"},   {"d1", "8"},
        {"pseudo-label", "none"},
        {"encoder-seed", "12345"}, {"encoder-epochs", "300"},
    };
    const Config cfg = resolve(std::move(defaults), config_path, flags);

    TrainConfig tc;
    tc.seed = parse_seed(cfg, "seed");
    tc.budget.epsilon = parse_double(cfg, "epsilon");
    tc.budget.delta = parse_double(cfg, "delta");
    tc.budget.omega = parse_double(cfg, "omega");
    tc.propagation.alpha = parse_double(cfg, "alpha");
    tc.propagation.steps = parse_steps(cfg.at("steps"));
    tc.Lambda_in = parse_double(cfg, "lambda");
    tc.xi = parse_double(cfg, "xi");
    tc.clip_p = parse_double(cfg, "clip-p");
    tc.loss.delta_l = parse_double(cfg, "delta-l");
    tc.encoder.d1 = static_cast<int>(parse_int(cfg, "d1"));
    tc.encoder.seed = parse_seed(cfg, "encoder-seed");
    tc.encoder.epochs = static_cast<int>(parse_int(cfg, "encoder-epochs"));

    if (cfg.at("loss") == "mlsm") tc.loss.kind = LossKind::MultilabelSoftMargin;
    else if (cfg.at("loss") == "pseudo-huber") tc.loss.kind = LossKind::PseudoHuber;
    else throw std::invalid_argument("--loss: expected 'mlsm' or 'pseudo-huber'");

    if (cfg.at("pseudo-label") == "none") tc.pseudo_label = PseudoLabelMode::None;
    else if (cfg.at("pseudo-label") == "all") tc.pseudo_label = PseudoLabelMode::All;
    else throw std::invalid_argument("--pseudo-label: expected 'none' or 'all'");

    const Graph g = load_dataset(dataset);
    tc.loss.c = g.num_classes();

    fs::create_directories(out_dir);
    ManifestWriter manifest{"train", cfg, tc.seed, dataset_files(dataset), {}};

    const ModelArtifact artifact = train(g, tc);

    const auto model_path = (fs::path(out_dir) / "model.bin").string();
    const auto report_path = (fs::path(out_dir) / "privacy_report.txt").string();
    save_artifact(model_path, artifact);
    std::ofstream(report_path) << privacy_report(artifact.calibration);
    manifest.outputs = {model_path, report_path};
    manifest.write(out_dir);
    return kOk;
}

int cmd_infer(const std::string& dataset, const std::string& model_path,
              const std::string& out_dir, const std::string& config_path,
              const Config& flags) {
    Config defaults = {
        {"mode", "private"}, {"alpha-i", "train"}, {"infer-one-over-s", "on"},
    };
    const Config cfg = resolve(std::move(defaults), config_path, flags);

    InferenceConfig ic;
    if (cfg.at("mode") == "private") ic.mode = InferenceMode::Private;
    else if (cfg.at("mode") == "public") ic.mode = InferenceMode::Public;
    else throw std::invalid_argument("--mode: expected 'private' or 'public'");
    if (cfg.at("alpha-i") != "train") {
        ic.alpha_I = parse_double(cfg, "alpha-i");
        if (ic.alpha_I < 0.0 || ic.alpha_I > 1.0)
            throw std::invalid_argument("--alpha-i: must lie in [0, 1]");
    }
    ic.one_over_s = parse_on_off(cfg, "infer-one-over-s");

    const ModelArtifact artifact = load_artifact(model_path);
    const Graph g = load_dataset(dataset);

    fs::create_directories(out_dir);
    auto inputs = dataset_files(dataset);
    inputs.push_back(model_path);
    ManifestWriter manifest{"infer", cfg, artifact.noise.seed, std::move(inputs), {}};

    const Matrix scores = infer(artifact, g, ic);
    const auto pred = argmax_rows(scores);

    const auto pred_path = (fs::path(out_dir) / "predictions.tsv").string();
    {
        std::ofstream os(pred_path);
        os.precision(12);
        for (int i = 0; i < g.n(); ++i) {
            os << i << '\t' << pred[i];
            for (Eigen::Index j = 0; j < scores.cols(); ++j)
                os << '\t' << scores(i, j);
            os << '\n';
        }
    }
    manifest.outputs = {pred_path};

    // Metrics over the test split when present, else all labeled nodes.
    std::vector<bool> mask(g.n(), false);
    bool any_test = false, any_labeled = false;
    for (int i = 0; i < g.n(); ++i) {
        if (g.split()[i] == Split::Test) any_test = true;
        if (g.is_labeled(i)) any_labeled = true;
    }
    for (int i = 0; i < g.n(); ++i)
        mask[i] = any_test ? g.split()[i] == Split::Test : g.is_labeled(i);

    if (any_labeled) {
        const double f1 = micro_f1(scores, g.Y(), mask);
        std::vector<int> class_counts(g.num_classes(), 0);
        int masked = 0;
        for (int i = 0; i < g.n(); ++i)
            if (mask[i]) { ++masked; ++class_counts[pred[i]]; }
        const auto metrics_path = (fs::path(out_dir) / "metrics.txt").string();
        std::ofstream os(metrics_path);
        os.precision(12);
        os << "micro_f1\t" << f1 << "\n";
        os << "evaluated_nodes\t" << masked << "\t"
           << (any_test ? "test" : "all_labeled") << "\n";
        for (int k = 0; k < g.num_classes(); ++k)
            os << "predicted_class_" << k << "\t" << class_counts[k] << "\n";
        for (const auto& [k, v] : cfg) os << "config." << k << "\t" << v << "\n";
        manifest.outputs.push_back(metrics_path);
    }

    manifest.write(out_dir);
    return kOk;
}

int cmd_audit(const std::string& dataset, const std::string& out_dir,
              const std::string& config_path, const Config& flags) {
    Config defaults = {
        {"alpha", "0.5"}, {"steps", "2"}, {"clip-p", "0.5"}, {"bound-scale", "1"},
    };
    const Config cfg = resolve(std::move(defaults), config_path, flags);

    PropagationConfig pc;
    pc.alpha = parse_double(cfg, "alpha");
    pc.steps = parse_steps(cfg.at("steps"));
    const double clip_p = parse_double(cfg, "clip-p");
    const double bound_scale = parse_double(cfg, "bound-scale");

    const Graph g = load_dataset(dataset);
    const Matrix X = normalize_rows(g.X());

    fs::create_directories(out_dir);
    ManifestWriter manifest{"audit", cfg, 0, dataset_files(dataset), {}};

    // empirical_sensitivity enforces the size guard; neighbor enumeration is
    // quadratic in n.
    SensitivityReport report = empirical_sensitivity(g, pc, X, 30, clip_p);
    report.bound *= bound_scale; // test hook for the failure path

    const bool violated = report.empirical_max_removal > report.bound + 1e-7;

    const auto report_path = (fs::path(out_dir) / "sensitivity_report.txt").string();
    {
        std::ofstream os(report_path);
        os << report.to_text();
        os << "bound_scale\t" << bound_scale << "\n";
        os << "violation\t" << (violated ? "yes" : "no") << "\n";
    }
    manifest.outputs = {report_path};
    manifest.write(out_dir);

    if (violated) {
        std::cerr << "audit: empirical removal sensitivity "
                  << report.empirical_max_removal << " exceeds bound "
                  << report.bound << "\n";
        return kAuditViolation;
    }
    return kOk;
}

int cmd_gen(const std::string& out_dir, const std::string& config_path,
            const Config& flags) {
    Config defaults = {
        {"kind", "sbm"},     {"n", "200"},         {"classes", "4"},
        {"p-intra", "0.05"}, {"p-inter", "0.005"}, {"feature-dim", "16"},
        {"noise", "0.5"},    {"seed", "0"},
        {"per-class-train", "10"}, {"val", "40"}, {"test", "100"},
    };
    const Config cfg = resolve(std::move(defaults), config_path, flags);

    SyntheticSpec spec;
    if (cfg.at("kind") == "sbm") spec.kind = SyntheticKind::Sbm;
    else if (cfg.at("kind") == "blobs-on-graph") spec.kind = SyntheticKind::BlobsOnGraph;
    else throw std::invalid_argument("kind: expected 'sbm' or 'blobs-on-graph'");
    spec.n = static_cast<int>(parse_int(cfg, "n"));
    spec.classes = static_cast<int>(parse_int(cfg, "classes"));
    spec.p_intra = parse_double(cfg, "p-intra");
    spec.p_inter = parse_double(cfg, "p-inter");
    spec.feature_dim = static_cast<int>(parse_int(cfg, "feature-dim"));
    spec.noise = parse_double(cfg, "noise");
    spec.seed = parse_seed(cfg, "seed");

    ManifestWriter manifest{"gen", cfg, spec.seed, {}, {}};

    Graph g = generate_sbm(spec);
    g = make_split(g, static_cast<int>(parse_int(cfg, "per-class-train")),
                   static_cast<int>(parse_int(cfg, "val")),
                   static_cast<int>(parse_int(cfg, "test")), spec.seed);
    save_dataset(out_dir, g);

    manifest.outputs = dataset_files(out_dir);
    manifest.write(out_dir);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcon: edge-DP node classification via objective perturbation"};
    app.require_subcommand(1);

    std::string dataset, out_dir, config_path, model_path;

    // Every value flag is collected as a string; precedence and typed
    // parsing happen in resolve() so config files and flags share one path.
    struct FlagSet {
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> opts;

        void add(CLI::App* cmd, const std::string& name, const std::string& help) {
            opts[name] = cmd->add_option("--" + name, values[name], help);
        }
        Config set_values() const {
            Config out;
            for (const auto& [name, opt] : opts)
                if (opt->count() > 0) out[name] = values.at(name);
            return out;
        }
    };

    auto* train_cmd = app.add_subcommand("train", "train a private model");
    train_cmd->add_option("--dataset", dataset, "dataset directory")->required();
    train_cmd->add_option("--out", out_dir, "output directory")->required();
    train_cmd->add_option("--config", config_path, "key=value config file");
    FlagSet train_flags;
    for (const auto& [name, help] :
         std::vector<std::pair<std::string, std::string>>{
             {"seed", "noise sampling seed"},
             {"epsilon", "privacy budget epsilon"},
             {"delta", "privacy budget delta"},
             {"omega", "budget allocation weight"},
             {"alpha", "restart probability"},
             {"steps", "propagation steps, comma list, 'inf' allowed"},
             {"lambda", "input regularization strength"},
             {"xi", "Lambda floor margin"},
             {"clip-p", "off-diagonal clip of the normalized adjacency"},
             {"loss", "mlsm | pseudo-huber"},
             {"delta-l", "pseudo-Huber width"},
             {"d1", "encoded feature width"},
             {"pseudo-label", "none | all"},
             {"encoder-seed", "encoder init seed"},
             {"encoder-epochs", "encoder training epochs"}})
        train_flags.add(train_cmd, name, help);

    auto* infer_cmd = app.add_subcommand("infer", "score nodes with a model");
    infer_cmd->add_option("--dataset", dataset, "dataset directory")->required();
    infer_cmd->add_option("--model", model_path, "model artifact")->required();
    infer_cmd->add_option("--out", out_dir, "output directory")->required();
    infer_cmd->add_option("--config", config_path, "key=value config file");
    FlagSet infer_flags;
    infer_flags.add(infer_cmd, "mode", "private | public");
    infer_flags.add(infer_cmd, "alpha-i", "private-inference restart probability");
    infer_flags.add(infer_cmd, "infer-one-over-s", "on | off");

    auto* audit_cmd = app.add_subcommand("audit", "empirical sensitivity audit");
    audit_cmd->add_option("--dataset", dataset, "dataset directory")->required();
    audit_cmd->add_option("--out", out_dir, "output directory")->required();
    audit_cmd->add_option("--config", config_path, "key=value config file");
    FlagSet audit_flags;
    audit_flags.add(audit_cmd, "alpha", "restart probability");
    audit_flags.add(audit_cmd, "steps", "propagation steps");
    audit_flags.add(audit_cmd, "clip-p", "off-diagonal clip");
    audit_flags.add(audit_cmd, "bound-scale", "multiply the bound (test hook)");

    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic dataset");
    gen_cmd->add_option("--out", out_dir, "output directory")->required();
    gen_cmd->add_option("--config", config_path, "key=value config file");
    FlagSet gen_flags;
    for (const char* name : {"kind", "n", "classes", "p-intra", "p-inter",
                             "feature-dim", "noise", "seed", "per-class-train",
                             "val", "test"})
        gen_flags.add(gen_cmd, name, "");
    gen_flags.opts["seed"]->description("generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (train_cmd->parsed())
            return cmd_train(dataset, out_dir, config_path, train_flags.set_values());
        if (infer_cmd->parsed())
            return cmd_infer(dataset, model_path, out_dir, config_path,
                             infer_flags.set_values());
        if (audit_cmd->parsed())
            return cmd_audit(dataset, out_dir, config_path, audit_flags.set_values());
        if (gen_cmd->parsed())
            return cmd_gen(out_dir, config_path, gen_flags.set_values());
        return kValidation;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << "\n";
        return kCalibration;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return kConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
