#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratchoice/csv.hpp"
#include "ratchoice/rng.hpp"

namespace ratchoice {

using Matrix = std::vector<std::vector<double>>;

// Feedforward net: tanh hidden layers, logistic output squashed to (0, 1).
// weights[l] has shape layer_sizes[l+1] x (layer_sizes[l] + 1); the last
// column is the bias.
struct ExpectationModel {
    std::vector<int> layer_sizes;
    std::vector<Matrix> weights;
};

struct TrainConfig {
    double learning_rate = 0.1;
    int epochs = 1000;  // 0 is a no-op training run
    std::uint64_t seed = 0;
    double train_fraction = 0.7;
};

inline void validate(const TrainConfig& c) {
    if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) {
        throw std::invalid_argument("learning_rate must be positive and finite");
    }
    if (c.epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (!(c.train_fraction > 0.0) || c.train_fraction > 1.0) {
        throw std::invalid_argument("train_fraction must lie in (0, 1]");
    }
}

struct LabeledDataset {
    std::vector<std::vector<double>> features;  // n x d
    std::vector<double> targets;                // n values in [0, 1]
    std::vector<std::string> feature_names;     // d
};

inline void validate(const LabeledDataset& data) {
    if (data.features.empty()) throw std::invalid_argument("dataset must have at least one row");
    const std::size_t d = data.features.front().size();
    if (d == 0) throw std::invalid_argument("dataset must have at least one feature");
    if (data.targets.size() != data.features.size()) {
        throw std::invalid_argument("feature and target row counts differ");
    }
    for (std::size_t r = 0; r < data.features.size(); ++r) {
        if (data.features[r].size() != d) {
            throw std::invalid_argument("row " + std::to_string(r) + ": inconsistent feature width");
        }
        for (double v : data.features[r]) {
            if (std::isnan(v)) throw std::invalid_argument("row " + std::to_string(r) + ": NaN feature");
        }
        if (std::isnan(data.targets[r]) || data.targets[r] < 0.0 || data.targets[r] > 1.0) {
            throw std::invalid_argument("row " + std::to_string(r) + ": target outside [0, 1]");
        }
    }
    if (!data.feature_names.empty() && data.feature_names.size() != d) {
        throw std::invalid_argument("feature_names size differs from feature width");
    }
}

struct DivergenceError : std::runtime_error {
    int epoch;
    explicit DivergenceError(int at_epoch)
        : std::runtime_error("training diverged (non-finite loss) at epoch " +
                             std::to_string(at_epoch)),
          epoch(at_epoch) {}
};

namespace detail {

inline double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// keeps the open-interval (0,1) contract in floating point
inline constexpr double kOutputMargin = 1e-15;

inline double squash_output(double z) {
    return std::clamp(logistic(z), kOutputMargin, 1.0 - kOutputMargin);
}

inline void check_shapes(const ExpectationModel& m) {
    if (m.layer_sizes.size() < 2) throw std::invalid_argument("model needs input and output layers");
    for (int s : m.layer_sizes) {
        if (s < 1) throw std::invalid_argument("layer sizes must be positive");
    }
    if (m.layer_sizes.back() != 1) {
        throw std::invalid_argument("output layer width must be 1, got " +
                                    std::to_string(m.layer_sizes.back()));
    }
    if (m.weights.size() + 1 != m.layer_sizes.size()) {
        throw std::invalid_argument("weight matrix count does not match layer_sizes");
    }
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const auto rows = static_cast<std::size_t>(m.layer_sizes[l + 1]);
        const auto cols = static_cast<std::size_t>(m.layer_sizes[l]) + 1;
        if (m.weights[l].size() != rows) {
            throw std::invalid_argument("weight matrix " + std::to_string(l) + " has wrong row count");
        }
        for (const auto& row : m.weights[l]) {
            if (row.size() != cols) {
                throw std::invalid_argument("weight matrix " + std::to_string(l) +
                                            " has wrong column count");
            }
            for (double w : row) {
                if (!std::isfinite(w)) {
                    throw std::invalid_argument("weight matrix " + std::to_string(l) +
                                                " contains a non-finite value");
                }
            }
        }
    }
}

// activations per layer, input first; activations.back() is the scalar output
inline std::vector<std::vector<double>> forward_activations(const ExpectationModel& m,
                                                            std::span<const double> x) {
    std::vector<std::vector<double>> acts;
    acts.reserve(m.weights.size() + 1);
    acts.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const auto& w = m.weights[l];
        const auto& a = acts.back();
        std::vector<double> next(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) {
            double z = w[j].back();  // bias
            for (std::size_t i = 0; i < a.size(); ++i) z += w[j][i] * a[i];
            next[j] = (l + 1 == m.weights.size()) ? squash_output(z) : std::tanh(z);
        }
        acts.push_back(std::move(next));
    }
    return acts;
}

}  // namespace detail

/// Weights drawn uniformly from [-0.5, 0.5]; the same seed reproduces the
/// model bit for bit. layer_sizes must end with an output width of 1.
inline ExpectationModel init_model(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2) throw std::invalid_argument("model needs input and output layers");
    ExpectationModel m;
    m.layer_sizes = layer_sizes;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        if (layer_sizes[l] < 1 || layer_sizes[l + 1] < 1) {
            throw std::invalid_argument("layer sizes must be positive");
        }
        Matrix w(static_cast<std::size_t>(layer_sizes[l + 1]),
                 std::vector<double>(static_cast<std::size_t>(layer_sizes[l]) + 1));
        for (auto& row : w) {
            for (auto& v : row) v = rng.uniform(-0.5, 0.5);
        }
        m.weights.push_back(std::move(w));
    }
    detail::check_shapes(m);  // rejects output width != 1
    return m;
}

inline int input_width(const ExpectationModel& m) { return m.layer_sizes.front(); }

/// Risk / predicted utility in the open interval (0, 1).
inline double forward(const ExpectationModel& m, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(m.layer_sizes.front())) {
        throw std::invalid_argument("input width " + std::to_string(x.size()) +
                                    " does not match model input " +
                                    std::to_string(m.layer_sizes.front()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
    }
    return detail::forward_activations(m, x).back().front();
}

inline double mse_loss(const ExpectationModel& m, const LabeledDataset& data) {
    double sum = 0.0;
    for (std::size_t r = 0; r < data.features.size(); ++r) {
        const double err = forward(m, data.features[r]) - data.targets[r];
        sum += err * err;
    }
    return sum / static_cast<double>(data.features.size());
}

/// Analytic gradient of mse_loss with respect to every weight, bias included.
inline std::vector<Matrix> loss_gradient(const ExpectationModel& m, const LabeledDataset& data) {
    std::vector<Matrix> grad;
    grad.reserve(m.weights.size());
    for (const auto& w : m.weights) {
        grad.emplace_back(w.size(), std::vector<double>(w.front().size(), 0.0));
    }
    const double inv_n = 1.0 / static_cast<double>(data.features.size());

    for (std::size_t r = 0; r < data.features.size(); ++r) {
        const auto acts = detail::forward_activations(m, data.features[r]);
        const double y = acts.back().front();
        // dL/dz at the logistic output, for the squared-error term of this row
        std::vector<double> delta{2.0 * inv_n * (y - data.targets[r]) * y * (1.0 - y)};

        for (std::size_t l = m.weights.size(); l-- > 0;) {
            const auto& a = acts[l];
            for (std::size_t j = 0; j < delta.size(); ++j) {
                for (std::size_t i = 0; i < a.size(); ++i) grad[l][j][i] += delta[j] * a[i];
                grad[l][j].back() += delta[j];
            }
            if (l == 0) break;
            std::vector<double> prev(a.size(), 0.0);
            for (std::size_t i = 0; i < a.size(); ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < delta.size(); ++j) s += m.weights[l][j][i] * delta[j];
                prev[i] = s * (1.0 - a[i] * a[i]);  // tanh'
            }
            delta = std::move(prev);
        }
    }
    return grad;
}

struct TrainResult {
    ExpectationModel model;
    std::vector<double> loss_curve;
};

/// Full-batch gradient descent on mean squared error. loss_curve[e] is the
/// loss at the weights entering epoch e. The returned model is the best
/// iterate seen, so its loss never exceeds the initial loss. Throws
/// DivergenceError when the loss goes non-finite.
inline TrainResult train(ExpectationModel model, const LabeledDataset& data,
                         const TrainConfig& cfg) {
    validate(cfg);
    validate(data);
    detail::check_shapes(model);
    if (data.features.front().size() != static_cast<std::size_t>(model.layer_sizes.front())) {
        throw std::invalid_argument("dataset feature width does not match model input width");
    }

    TrainResult out;
    if (cfg.epochs == 0) {
        out.model = std::move(model);
        return out;
    }

    ExpectationModel best = model;
    double best_loss = std::numeric_limits<double>::infinity();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double loss = mse_loss(model, data);
        if (!std::isfinite(loss)) throw DivergenceError(epoch);
        out.loss_curve.push_back(loss);
        if (loss < best_loss) {
            best_loss = loss;
            best = model;
        }
        const auto grad = loss_gradient(model, data);
        for (std::size_t l = 0; l < model.weights.size(); ++l) {
            for (std::size_t j = 0; j < model.weights[l].size(); ++j) {
                for (std::size_t i = 0; i < model.weights[l][j].size(); ++i) {
                    model.weights[l][j][i] -= cfg.learning_rate * grad[l][j][i];
                }
            }
        }
    }
    const double final_loss = mse_loss(model, data);
    if (!std::isfinite(final_loss)) throw DivergenceError(cfg.epochs);
    out.model = final_loss <= best_loss ? std::move(model) : std::move(best);
    return out;
}

/// Max relative discrepancy between the analytic gradient and central finite
/// differences over every weight. perturbation must lie in [1e-8, 1e-3].
inline double grad_check(const ExpectationModel& model, const LabeledDataset& data,
                         double perturbation) {
    if (!(perturbation >= 1e-8) || !(perturbation <= 1e-3)) {
        throw std::invalid_argument("grad_check: perturbation must lie in [1e-8, 1e-3]");
    }
    validate(data);
    detail::check_shapes(model);

    const auto analytic = loss_gradient(model, data);
    ExpectationModel probe = model;
    double max_err = 0.0;
    for (std::size_t l = 0; l < probe.weights.size(); ++l) {
        for (std::size_t j = 0; j < probe.weights[l].size(); ++j) {
            for (std::size_t i = 0; i < probe.weights[l][j].size(); ++i) {
                const double w0 = probe.weights[l][j][i];
                probe.weights[l][j][i] = w0 + perturbation;
                const double lp = mse_loss(probe, data);
                probe.weights[l][j][i] = w0 - perturbation;
                const double lm = mse_loss(probe, data);
                probe.weights[l][j][i] = w0;
                const double numeric = (lp - lm) / (2.0 * perturbation);
                const double a = analytic[l][j][i];
                const double scale = std::max(std::abs(a), std::abs(numeric));
                const double err = scale > 1e-10 ? std::abs(a - numeric) / scale
                                                 : std::abs(a - numeric);
                max_err = std::max(max_err, err);
            }
        }
    }
    return max_err;
}

/// Mean of the last `order` values: the adaptive-expectations baseline. It
/// extrapolates a trend poorly, which is the point of keeping it around.
inline double adaptive_forecast(std::span<const double> series, int order) {
    if (order < 1) throw std::invalid_argument("adaptive_forecast: order must be positive");
    if (series.size() < static_cast<std::size_t>(order)) {
        throw std::invalid_argument("adaptive_forecast: series length " +
                                    std::to_string(series.size()) + " shorter than order " +
                                    std::to_string(order));
    }
    const auto tail = series.last(static_cast<std::size_t>(order));
    return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(order);
}

// --- serialization ----------------------------------------------------------
// Flat text: "layers: s0 s1 ... sk", then one line per weight matrix row with
// 17-significant-digit doubles. Round-trips exactly.

inline void append_model_text(const ExpectationModel& m, std::string& out) {
    out += "layers:";
    for (int s : m.layer_sizes) out += " " + std::to_string(s);
    out += "\n";
    for (const auto& w : m.weights) {
        for (const auto& row : w) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += " ";
                out += format_double17(row[i]);
            }
            out += "\n";
        }
    }
}

inline void save_model(const ExpectationModel& m, const std::filesystem::path& path) {
    detail::check_shapes(m);
    std::string out;
    append_model_text(m, out);
    csv::write_file(path, out);
}

namespace detail {

inline std::vector<double> parse_double_row(const std::string& line, std::size_t line_no) {
    std::vector<double> row;
    const char* s = line.c_str();
    char* end = nullptr;
    while (*s) {
        const double v = std::strtod(s, &end);
        if (end == s) {
            throw std::runtime_error("model file line " + std::to_string(line_no) +
                                     ": unparseable number");
        }
        row.push_back(v);
        s = end;
        while (*s == ' ') ++s;
    }
    return row;
}

inline ExpectationModel load_model_block(const std::vector<std::string>& lines, std::size_t& pos) {
    if (pos >= lines.size() || lines[pos].rfind("layers:", 0) != 0) {
        throw std::runtime_error("model file line " + std::to_string(pos + 1) +
                                 ": expected 'layers:' header");
    }
    ExpectationModel m;
    for (double v : parse_double_row(lines[pos].substr(7), pos + 1)) {
        m.layer_sizes.push_back(static_cast<int>(v));
    }
    ++pos;
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        Matrix w;
        for (int j = 0; j < m.layer_sizes[l + 1]; ++j) {
            if (pos >= lines.size()) throw std::runtime_error("model file truncated");
            w.push_back(parse_double_row(lines[pos], pos + 1));
            ++pos;
        }
        m.weights.push_back(std::move(w));
    }
    check_shapes(m);
    return m;
}

}  // namespace detail

inline ExpectationModel load_model(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    std::size_t pos = 0;
    return detail::load_model_block(lines, pos);
}

// --- seeded ensemble --------------------------------------------------------
// K independently initialized point-estimate networks; the prediction is the
// member mean, still strictly inside (0, 1).

struct EnsembleModel {
    std::vector<ExpectationModel> members;
};

inline EnsembleModel train_ensemble(const std::vector<int>& layer_sizes, int k,
                                    const LabeledDataset& data, const TrainConfig& cfg) {
    if (k < 1) throw std::invalid_argument("ensemble size must be >= 1");
    EnsembleModel ens;
    for (int i = 0; i < k; ++i) {
        auto member = init_model(layer_sizes, mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        ens.members.push_back(train(std::move(member), data, cfg).model);
    }
    return ens;
}

inline double forward(const EnsembleModel& ens, std::span<const double> x) {
    if (ens.members.empty()) throw std::invalid_argument("empty ensemble");
    double sum = 0.0;
    for (const auto& m : ens.members) sum += forward(m, x);
    return sum / static_cast<double>(ens.members.size());
}

inline int input_width(const EnsembleModel& ens) {
    if (ens.members.empty()) throw std::invalid_argument("empty ensemble");
    return input_width(ens.members.front());
}

// Anything usable as the learned risk function: a point-estimate network, an
// ensemble, or a test stub.
template <typename M>
concept RiskPredictor = requires(const M& m, std::span<const double> x) {
    { forward(m, x) } -> std::convertible_to<double>;
    { input_width(m) } -> std::convertible_to<int>;
};

inline void save_model(const EnsembleModel& ens, const std::filesystem::path& path) {
    if (ens.members.empty()) throw std::invalid_argument("empty ensemble");
    std::string out = "ensemble: " + std::to_string(ens.members.size()) + "\n";
    for (const auto& m : ens.members) append_model_text(m, out);
    csv::write_file(path, out);
}

inline EnsembleModel load_ensemble(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    EnsembleModel ens;
    std::size_t pos = 0;
    if (!lines.empty() && lines[0].rfind("ensemble:", 0) == 0) {
        const int k = std::stoi(lines[0].substr(9));
        pos = 1;
        for (int i = 0; i < k; ++i) ens.members.push_back(detail::load_model_block(lines, pos));
    } else {
        ens.members.push_back(detail::load_model_block(lines, pos));
    }
    return ens;
}

}  // namespace ratchoice
