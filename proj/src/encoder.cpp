#include "gcon/encoder.hpp"
#include "gcon/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gcon {

namespace {

Matrix init_weights(int rows, int cols, Rng& rng) {
    const double a = 1.0 / std::sqrt(static_cast<double>(rows));
    Matrix W(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) W(i, j) = rng.uniform_symmetric(a);
    return W;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix P(logits.rows(), logits.cols());
    for (int i = 0; i < logits.rows(); ++i) {
        const double mx = logits.row(i).maxCoeff();
        Eigen::RowVectorXd e = (logits.row(i).array() - mx).exp();
        P.row(i) = e / e.sum();
    }
    return P;
}

int argmax_row(const Eigen::RowVectorXd& row) {
    int best = 0;
    for (int j = 1; j < row.size(); ++j)
        if (row(j) > row(best)) best = j; // ties keep the lowest index
    return best;
}

} // namespace

EncoderModel fit_encoder(const Matrix& X, const Matrix& Y,
                         const std::vector<Split>& split,
                         const EncoderSettings& settings) {
    const int d0 = static_cast<int>(X.cols());
    const int c = static_cast<int>(Y.cols());

    std::vector<int> train_rows;
    for (std::size_t i = 0; i < split.size(); ++i)
        if (split[i] == Split::Train) train_rows.push_back(static_cast<int>(i));
    if (train_rows.empty()) throw std::invalid_argument("empty train split");

    const int nt = static_cast<int>(train_rows.size());
    Matrix Xl(nt, d0), Yl(nt, c);
    for (int i = 0; i < nt; ++i) {
        Xl.row(i) = X.row(train_rows[i]);
        Yl.row(i) = Y.row(train_rows[i]);
    }
    for (int j = 0; j < c; ++j)
        if (Yl.col(j).sum() == 0.0)
            throw std::invalid_argument("class absent from train split");

    Rng rng = Rng(settings.seed).child(0x656e63ULL);
    EncoderModel m;
    m.bias = settings.bias;
    m.W1a = init_weights(d0, settings.h, rng);
    m.W1b = init_weights(settings.h, settings.d1, rng);
    m.W2 = init_weights(settings.d1, c, rng);
    m.b1a = settings.bias ? Vector::Zero(settings.h) : Vector();
    m.b1b = settings.bias ? Vector::Zero(settings.d1) : Vector();
    m.b2 = settings.bias ? Vector::Zero(c) : Vector();

    for (int epoch = 0; epoch < settings.epochs; ++epoch) {
        Matrix pre = Xl * m.W1a;
        if (settings.bias) pre.rowwise() += m.b1a.transpose();
        const Matrix H = pre.array().tanh();

        Matrix E = H * m.W1b;
        if (settings.bias) E.rowwise() += m.b1b.transpose();

        Matrix logits = E * m.W2;
        if (settings.bias) logits.rowwise() += m.b2.transpose();

        const Matrix P = softmax_rows(logits);
        const Matrix dlogits = (P - Yl) / nt;

        const Matrix dW2 = E.transpose() * dlogits;
        const Matrix dE = dlogits * m.W2.transpose();
        const Matrix dW1b = H.transpose() * dE;
        const Matrix dH = (dE * m.W1b.transpose()).array() * (1.0 - H.array().square());
        const Matrix dW1a = Xl.transpose() * dH;

        m.W2 -= settings.lr * dW2;
        m.W1b -= settings.lr * dW1b;
        m.W1a -= settings.lr * dW1a;
        if (settings.bias) {
            m.b2 -= settings.lr * dlogits.colwise().sum().transpose();
            m.b1b -= settings.lr * dE.colwise().sum().transpose();
            m.b1a -= settings.lr * dH.colwise().sum().transpose();
        }
    }

    const Matrix logits = head_logits(m, encode(m, Xl));
    int correct = 0;
    for (int i = 0; i < nt; ++i)
        if (argmax_row(logits.row(i)) == argmax_row(Yl.row(i))) ++correct;
    m.train_accuracy = static_cast<double>(correct) / nt;
    return m;
}

Matrix encode(const EncoderModel& model, const Matrix& X) {
    if (X.cols() != model.d0())
        throw std::invalid_argument("feature width does not match encoder");
    Matrix pre = X * model.W1a;
    if (model.bias) pre.rowwise() += model.b1a.transpose();
    Matrix E = Matrix(pre.array().tanh()) * model.W1b;
    if (model.bias) E.rowwise() += model.b1b.transpose();
    return E;
}

Matrix head_logits(const EncoderModel& model, const Matrix& encoded) {
    Matrix logits = encoded * model.W2;
    if (model.bias) logits.rowwise() += model.b2.transpose();
    return logits;
}

PseudoLabelResult pseudo_label(const EncoderModel& model, const Matrix& X,
                               const Matrix& Y, const std::vector<Split>& split,
                               PseudoLabelMode mode) {
    PseudoLabelResult out;
    out.Y = Y;
    for (std::size_t i = 0; i < split.size(); ++i)
        if (split[i] == Split::Train) out.train_rows.push_back(static_cast<int>(i));

    if (mode == PseudoLabelMode::None) return out;

    const Matrix logits = head_logits(model, encode(model, X));
    out.train_rows.clear();
    for (int i = 0; i < X.rows(); ++i) {
        if (split[static_cast<std::size_t>(i)] != Split::Train) {
            out.Y.row(i).setZero();
            out.Y(i, argmax_row(logits.row(i))) = 1.0;
        }
        out.train_rows.push_back(i);
    }
    return out;
}

} // namespace gcon
