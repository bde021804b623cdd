#include "gcon/artifact.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

namespace gcon {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'G', 'C', 'O', 'N', 'A', 'R', 'T', '\n'};

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("truncated artifact file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_matrix(std::ostream& os, const std::string& name, const Matrix& m) {
    write_u64(os, name.size());
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u64(os, static_cast<std::uint64_t>(m.rows()));
    write_u64(os, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            std::uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            std::memcpy(&bits, &v, sizeof(bits));
            write_u64(os, bits);
        }
}

std::pair<std::string, Matrix> read_matrix(std::istream& is) {
    const auto name_len = read_u64(is);
    std::string name(name_len, '\0');
    is.read(name.data(), static_cast<std::streamsize>(name_len));
    const auto rows = static_cast<Eigen::Index>(read_u64(is));
    const auto cols = static_cast<Eigen::Index>(read_u64(is));
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const std::uint64_t bits = read_u64(is);
            double v;
            std::memcpy(&v, &bits, sizeof(v));
            m(i, j) = v;
        }
    return {std::move(name), std::move(m)};
}

json steps_to_json(const PropagationConfig& cfg) {
    json steps = json::array();
    for (Step m : cfg.steps) steps.push_back(m);
    return steps;
}

} // namespace

void save_artifact(const std::string& path, const ModelArtifact& a) {
    json meta;
    meta["format_version"] = a.format_version;
    meta["propagation"] = {{"alpha", a.propagation.alpha},
                           {"steps", steps_to_json(a.propagation)}};
    meta["clip_p"] = a.clip_p;
    meta["loss"] = {{"kind", a.loss.kind == LossKind::MultilabelSoftMargin ? "mlsm"
                                                                           : "pseudo-huber"},
                    {"c", a.loss.c},
                    {"delta_l", a.loss.delta_l}};
    meta["pseudo_label"] = a.pseudo_label == PseudoLabelMode::All ? "all" : "none";
    const auto& r = a.calibration;
    meta["calibration"] = {
        {"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3},
        {"Psi_Z", r.PsiZ}, {"c_sf", r.c_sf},
        {"Lambda_eff", r.Lambda_eff}, {"xi", r.xi},
        {"c_theta", r.c_theta}, {"epsilon_Lambda", r.epsilon_Lambda},
        {"LambdaPrime", r.LambdaPrime},
        {"beta", std::isinf(r.beta) ? -1.0 : r.beta},
        {"branch", static_cast<int>(r.branch)},
        {"epsilon", r.budget.epsilon}, {"delta", r.budget.delta},
        {"omega", r.budget.omega},
        {"n1", r.n1}, {"d", r.d}, {"c", r.c},
    };
    meta["noise"] = {{"seed", a.noise.seed}, {"radii", a.noise.radii}};
    meta["trace"] = {{"iterations", a.trace.iterations},
                     {"final_grad_norm", a.trace.final_grad_norm},
                     {"final_value", a.trace.final_value}};
    meta["stationarity_residual"] = a.stationarity_residual;
    meta["encoder"] = {{"bias", a.encoder.bias},
                       {"train_accuracy", a.encoder.train_accuracy}};

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open artifact file for writing: " + path);
    os.write(kMagic, sizeof(kMagic));
    const std::string meta_str = meta.dump();
    write_u64(os, meta_str.size());
    os.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));

    const auto as_row = [](const Vector& v) {
        return Matrix(v.transpose());
    };
    write_u64(os, 8);
    write_matrix(os, "Theta", a.Theta);
    write_matrix(os, "enc_W1a", a.encoder.W1a);
    write_matrix(os, "enc_b1a", as_row(a.encoder.b1a));
    write_matrix(os, "enc_W1b", a.encoder.W1b);
    write_matrix(os, "enc_b1b", as_row(a.encoder.b1b));
    write_matrix(os, "enc_W2", a.encoder.W2);
    write_matrix(os, "enc_b2", as_row(a.encoder.b2));
    write_matrix(os, "noise_B", a.noise.B);
    if (!os) throw std::runtime_error("write failure on artifact file: " + path);
}

ModelArtifact load_artifact(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open artifact file: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("not a model artifact: " + path);

    const auto meta_len = read_u64(is);
    std::string meta_str(meta_len, '\0');
    is.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw std::runtime_error("truncated artifact file");
    const json meta = json::parse(meta_str);

    ModelArtifact a;
    a.format_version = meta.at("format_version").get<int>();
    if (a.format_version != 1)
        throw std::runtime_error("unsupported artifact format version");

    a.propagation.alpha = meta.at("propagation").at("alpha").get<double>();
    a.propagation.steps.clear();
    for (const auto& s : meta.at("propagation").at("steps"))
        a.propagation.steps.push_back(s.get<int>());
    a.clip_p = meta.at("clip_p").get<double>();

    const std::string loss_kind = meta.at("loss").at("kind").get<std::string>();
    a.loss.kind = loss_kind == "mlsm" ? LossKind::MultilabelSoftMargin
                                      : LossKind::PseudoHuber;
    a.loss.c = meta.at("loss").at("c").get<int>();
    a.loss.delta_l = meta.at("loss").at("delta_l").get<double>();
    a.pseudo_label = meta.at("pseudo_label").get<std::string>() == "all"
                         ? PseudoLabelMode::All : PseudoLabelMode::None;

    const auto& cal = meta.at("calibration");
    auto& r = a.calibration;
    r.c1 = cal.at("c1").get<double>();
    r.c2 = cal.at("c2").get<double>();
    r.c3 = cal.at("c3").get<double>();
    r.PsiZ = cal.at("Psi_Z").get<double>();
    r.c_sf = cal.at("c_sf").get<double>();
    r.Lambda_eff = cal.at("Lambda_eff").get<double>();
    r.xi = cal.at("xi").get<double>();
    r.c_theta = cal.at("c_theta").get<double>();
    r.epsilon_Lambda = cal.at("epsilon_Lambda").get<double>();
    r.LambdaPrime = cal.at("LambdaPrime").get<double>();
    const double beta = cal.at("beta").get<double>();
    r.beta = beta < 0.0 ? std::numeric_limits<double>::infinity() : beta;
    r.branch = static_cast<CalibrationBranch>(cal.at("branch").get<int>());
    r.budget.epsilon = cal.at("epsilon").get<double>();
    r.budget.delta = cal.at("delta").get<double>();
    r.budget.omega = cal.at("omega").get<double>();
    r.n1 = cal.at("n1").get<int>();
    r.d = cal.at("d").get<int>();
    r.c = cal.at("c").get<int>();

    a.noise.seed = meta.at("noise").at("seed").get<std::uint64_t>();
    a.noise.radii = meta.at("noise").at("radii").get<std::vector<double>>();
    a.trace.iterations = meta.at("trace").at("iterations").get<int>();
    a.trace.final_grad_norm = meta.at("trace").at("final_grad_norm").get<double>();
    a.trace.final_value = meta.at("trace").at("final_value").get<double>();
    a.stationarity_residual = meta.at("stationarity_residual").get<double>();
    a.encoder.bias = meta.at("encoder").at("bias").get<bool>();
    a.encoder.train_accuracy = meta.at("encoder").at("train_accuracy").get<double>();

    const auto count = read_u64(is);
    std::map<std::string, Matrix> mats;
    for (std::uint64_t i = 0; i < count; ++i) {
        auto [name, m] = read_matrix(is);
        mats.emplace(std::move(name), std::move(m));
    }
    const auto get = [&](const char* name) -> Matrix& {
        auto it = mats.find(name);
        if (it == mats.end())
            throw std::runtime_error(std::string("missing matrix in artifact: ") + name);
        return it->second;
    };
    a.Theta = get("Theta");
    a.encoder.W1a = get("enc_W1a");
    a.encoder.W1b = get("enc_W1b");
    a.encoder.W2 = get("enc_W2");
    a.encoder.b1a = get("enc_b1a").row(0).transpose();
    a.encoder.b1b = get("enc_b1b").row(0).transpose();
    a.encoder.b2 = get("enc_b2").row(0).transpose();
    a.noise.B = get("noise_B");
    return a;
}

} // namespace gcon
