// Command-line front end: rank alternatives, generate or ingest dyadic
// conflict data, train the risk model, run the control loop, and reshape
// reports for plotting. Every stochastic command takes an explicit --seed and
// is byte-deterministic in its outputs.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratchoice/ratchoice.hpp"

namespace rc = ratchoice;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNumericalError = 2;

// ---------------------------------------------------------------------------
// rank

struct RankArgs {
    std::string in_path;
    std::string out_path;
};

int run_rank(const RankArgs& args) {
    const auto alternatives = rc::load_alternatives_csv(args.in_path);
    std::string out = "id,label,cost,utility\n";
    if (alternatives.empty()) {
        std::fprintf(stderr, "warning: no alternatives in %s; writing header only\n",
                     args.in_path.c_str());
        rc::csv::write_file(args.out_path, out);
        return kExitOk;
    }
    const auto ranking = rc::rank_alternatives(alternatives, rc::InverseCostUtility{});
    for (const auto& entry : ranking) {
        const auto& a = entry.alternative;
        out += a.id + "," + a.label + "," + rc::format_double(a.cost) + "," +
               rc::format_double(entry.utility.value()) + "\n";
    }
    rc::csv::write_file(args.out_path, out);
    std::printf("selected: %s (utility %s)\n", ranking.front().alternative.label.c_str(),
                rc::format_double(ranking.front().utility.value()).c_str());
    if (ranking.size() > 1) {
        std::printf("opportunity cost: %s\n",
                    rc::format_double(rc::opportunity_cost(ranking).value()).c_str());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataArgs {
    int n = 1000;
    std::uint64_t seed = 0;
    double noise_sd = 0.0;
    std::vector<double> coefficients;  // empty -> defaults
    std::string out_path;
};

int run_gen_data(const GenDataArgs& args) {
    rc::SynthConfig cfg = rc::default_synth_config(args.n, args.seed);
    cfg.noise_sd = args.noise_sd;
    if (!args.coefficients.empty()) {
        if (args.coefficients.size() != cfg.coefficients.size()) {
            throw std::invalid_argument("--coefficients takes exactly " +
                                        std::to_string(cfg.coefficients.size()) +
                                        " values (intercept + 7 weights)");
        }
        std::copy(args.coefficients.begin(), args.coefficients.end(), cfg.coefficients.begin());
    }
    const auto dyads = rc::synth_generate(cfg);
    rc::write_dyads_csv(dyads, args.out_path);
    std::size_t conflicts = 0;
    for (const auto& d : dyads) conflicts += static_cast<std::size_t>(d.outcome);
    std::printf("generated %d dyads, %zu conflicts (rate %s)\n", args.n, conflicts,
                rc::format_double(static_cast<double>(conflicts) / args.n).c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
    std::string data_path;
    std::string model_out;
    std::string norm_out;  // default: <model_out>.norm
    std::string loss_out;  // default: <model_out>.loss.csv
    std::uint64_t seed = 0;
    double learning_rate = 1.0;
    int epochs = 1000;
    int hidden = 10;
    double train_fraction = 0.7;
    int ensemble = 1;
};

// Panel files are lagged (features year-1, outcome year); plain files are
// taken as already lagged.
std::vector<rc::Dyad> load_training_rows(const std::string& path) {
    const auto loaded = rc::load_dyads_csv(path);
    if (!loaded.is_panel) return loaded.dyads;
    const auto lagged = rc::lag_panel(rc::make_panel(loaded.panel));
    std::printf("lagged panel: %zu training rows (%zu without a predecessor dropped)\n",
                lagged.rows.size(), lagged.dropped);
    return lagged.rows;
}

double accuracy_at_half(const rc::ExpectationModel& m, const rc::LabeledDataset& d) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < d.features.size(); ++r) {
        const double predicted = rc::forward(m, d.features[r]) > 0.5 ? 1.0 : 0.0;
        if (predicted == d.targets[r]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(d.features.size());
}

double accuracy_at_half(const rc::EnsembleModel& ens, const rc::LabeledDataset& d) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < d.features.size(); ++r) {
        const double predicted = rc::forward(ens, d.features[r]) > 0.5 ? 1.0 : 0.0;
        if (predicted == d.targets[r]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(d.features.size());
}

int run_train(const TrainArgs& args) {
    const auto rows = load_training_rows(args.data_path);
    if (rows.empty()) throw std::invalid_argument(args.data_path + ": no data rows to train on");

    rc::TrainConfig cfg;
    cfg.learning_rate = args.learning_rate;
    cfg.epochs = args.epochs;
    cfg.seed = args.seed;
    cfg.train_fraction = args.train_fraction;
    rc::validate(cfg);
    if (args.hidden < 1) throw std::invalid_argument("--hidden must be >= 1");
    if (args.ensemble < 1) throw std::invalid_argument("--ensemble must be >= 1");

    // deterministic front split; normalization is fitted on the training part
    // only so held-out rows see the same affine map a controlled dyad would
    const auto n_train = static_cast<std::size_t>(
        std::max<double>(1.0, std::round(args.train_fraction * static_cast<double>(rows.size()))));
    const std::vector<rc::Dyad> train_rows(rows.begin(),
                                           rows.begin() + std::min(n_train, rows.size()));
    const std::vector<rc::Dyad> holdout_rows(rows.begin() + std::min(n_train, rows.size()),
                                             rows.end());
    const auto normalized = rc::normalize(train_rows);
    const auto train_set = rc::to_dataset(train_rows, normalized.params);

    const std::vector<int> layers = {rc::kFeatureCount, args.hidden, 1};
    const std::string norm_out = args.norm_out.empty() ? args.model_out + ".norm" : args.norm_out;
    const std::string loss_out =
        args.loss_out.empty() ? args.model_out + ".loss.csv" : args.loss_out;

    std::vector<double> loss_curve;
    double train_acc = 0.0;
    std::optional<double> holdout_acc;
    if (args.ensemble > 1) {
        const auto ens = rc::train_ensemble(layers, args.ensemble, train_set, cfg);
        rc::save_model(ens, args.model_out);
        train_acc = accuracy_at_half(ens, train_set);
        if (!holdout_rows.empty()) {
            holdout_acc = accuracy_at_half(ens, rc::to_dataset(holdout_rows, normalized.params));
        }
    } else {
        auto result = rc::train(rc::init_model(layers, args.seed), train_set, cfg);
        rc::save_model(result.model, args.model_out);
        loss_curve = std::move(result.loss_curve);
        train_acc = accuracy_at_half(result.model, train_set);
        if (!holdout_rows.empty()) {
            holdout_acc =
                accuracy_at_half(result.model, rc::to_dataset(holdout_rows, normalized.params));
        }
    }
    rc::save_norm_params(normalized.params, norm_out);

    std::string loss_csv = "epoch,loss\n";
    for (std::size_t e = 0; e < loss_curve.size(); ++e) {
        loss_csv += std::to_string(e) + "," + rc::format_double(loss_curve[e]) + "\n";
    }
    rc::csv::write_file(loss_out, loss_csv);

    std::printf("train rows: %zu, holdout rows: %zu\n", train_rows.size(), holdout_rows.size());
    if (!loss_curve.empty()) {
        std::printf("loss: %s -> %s over %zu epochs\n",
                    rc::format_double(loss_curve.front()).c_str(),
                    rc::format_double(loss_curve.back()).c_str(), loss_curve.size());
    }
    std::printf("train accuracy: %s\n", rc::format_double(train_acc).c_str());
    if (holdout_acc) {
        std::printf("holdout accuracy: %s\n", rc::format_double(*holdout_acc).c_str());
    } else {
        std::printf("holdout accuracy: n/a (train fraction 1)\n");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// control

struct ControlArgs {
    std::string model_path;
    std::string norm_path;  // default: <model_path>.norm
    std::string data_path;
    std::string strategy;  // "single:<var>" or "multiple:<var>+<var>..."
    bool all = false;
    std::optional<std::uint64_t> seed;
    int sa_restarts = 5;
    double gss_tolerance = 1e-6;
    std::string summary_out;
    std::string detail_out;  // for --all, strategy label is spliced in
};

rc::ControlStrategy parse_strategy(const std::string& text, const ControlArgs& args) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("--strategy must look like single:<variable> or "
                                    "multiple:<var>+<var>+...");
    }
    const std::string mode = text.substr(0, colon);
    const std::string vars_text = text.substr(colon + 1);
    std::vector<rc::ControlVariable> vars;
    std::size_t start = 0;
    while (start <= vars_text.size()) {
        const auto plus = vars_text.find('+', start);
        const auto token = vars_text.substr(start, plus == std::string::npos ? std::string::npos
                                                                             : plus - start);
        if (token.empty()) throw std::invalid_argument("--strategy has an empty variable name");
        vars.push_back(rc::parse_control_variable(token));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }

    rc::ControlStrategy strategy;
    if (mode == "single") {
        if (vars.size() != 1) {
            throw std::invalid_argument("single strategy takes exactly one variable");
        }
        strategy = rc::single_strategy(vars.front());
    } else if (mode == "multiple") {
        strategy = rc::multiple_strategy(vars, args.seed.value_or(0));
    } else {
        throw std::invalid_argument("unknown strategy mode '" + mode +
                                    "' (expected single or multiple)");
    }
    strategy.gss.tolerance = args.gss_tolerance;
    strategy.sa.restarts = args.sa_restarts;
    return strategy;
}

std::string detail_path_for(const std::string& base, const std::string& label) {
    const fs::path p(base);
    fs::path out = p.parent_path() / p.stem();
    out += "." + label;
    out += p.extension();
    return out.string();
}

int run_control(const ControlArgs& args) {
    const auto ensemble = rc::load_ensemble(args.model_path);
    const std::string norm_path =
        args.norm_path.empty() ? args.model_path + ".norm" : args.norm_path;
    const auto norm = rc::load_norm_params(norm_path);
    const auto loaded = rc::load_dyads_csv(args.data_path);
    const auto dyads = loaded.is_panel ? rc::lag_panel(rc::make_panel(loaded.panel)).rows
                                       : loaded.dyads;

    std::vector<rc::ControlStrategy> strategies;
    if (args.all) {
        if (!args.seed) {
            throw std::invalid_argument("--all runs simulated annealing; --seed is required");
        }
        // presentation order: the four singles, then the full multiple
        strategies.push_back(rc::single_strategy(rc::ControlVariable::Democracy));
        strategies.push_back(rc::single_strategy(rc::ControlVariable::Allies));
        strategies.push_back(rc::single_strategy(rc::ControlVariable::Dependency));
        strategies.push_back(rc::single_strategy(rc::ControlVariable::Capability));
        strategies.push_back(rc::multiple_strategy(
            {rc::ControlVariable::Democracy, rc::ControlVariable::Allies,
             rc::ControlVariable::Capability, rc::ControlVariable::Dependency},
            *args.seed));
        for (auto& s : strategies) {
            s.gss.tolerance = args.gss_tolerance;
            s.sa.restarts = args.sa_restarts;
        }
    } else {
        if (args.strategy.empty()) {
            throw std::invalid_argument("either --strategy or --all is required");
        }
        auto strategy = parse_strategy(args.strategy, args);
        if (strategy.mode == rc::StrategyMode::Multiple && !args.seed) {
            throw std::invalid_argument(
                "multiple strategies run simulated annealing; --seed is required");
        }
        strategies.push_back(std::move(strategy));
    }

    std::printf("avoidance threshold: risk < %s\n",
                rc::format_double(rc::kAvoidanceThreshold).c_str());
    std::vector<rc::AvoidanceReport> reports;
    for (const auto& strategy : strategies) {
        reports.push_back(rc::avoidance_report(ensemble, norm, dyads, strategy));
        const auto& r = reports.back();
        std::printf("%s:%s  conflicts=%zu avoided=%zu percent_avoided=%s\n",
                    r.strategy.mode == rc::StrategyMode::Single ? "single" : "multiple",
                    rc::variable_set_label(r.strategy).c_str(), r.n_conflicts, r.n_avoided,
                    rc::format_double(r.percent_avoided).c_str());
    }
    rc::write_summary_csv(reports, args.summary_out);
    std::printf("wrote %s\n", args.summary_out.c_str());
    if (!args.detail_out.empty()) {
        if (reports.size() == 1) {
            rc::write_detail_csv(reports.front(), args.detail_out);
            std::printf("wrote %s\n", args.detail_out.c_str());
        } else {
            for (const auto& r : reports) {
                const std::string label = r.strategy.mode == rc::StrategyMode::Single
                                              ? rc::variable_set_label(r.strategy)
                                              : "multiple";
                const auto path = detail_path_for(args.detail_out, label);
                rc::write_detail_csv(r, path);
                std::printf("wrote %s\n", path.c_str());
            }
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
    std::string summary_path;
    std::string out_path;
};

// Plot rank: Democracy, Allies, Dependency, Capability, then any multiple.
int plot_rank(const std::string& strategy, const std::string& variable_set) {
    if (strategy == "multiple") return 4;
    if (variable_set == "democracy") return 0;
    if (variable_set == "allies") return 1;
    if (variable_set == "dependency") return 2;
    if (variable_set == "capability") return 3;
    throw std::invalid_argument("unknown single-strategy variable '" + variable_set + "'");
}

std::string plot_label(const std::string& strategy, const std::string& variable_set) {
    if (strategy == "multiple") return "Multiple";
    std::string label = variable_set;
    label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    return label;
}

int run_report(const ReportArgs& args) {
    const auto lines = rc::csv::read_lines(args.summary_path);
    if (lines.empty() || lines[0] != rc::kSummaryHeader) {
        throw std::invalid_argument(args.summary_path + ": expected summary header '" +
                                    rc::kSummaryHeader + "'");
    }
    struct PlotRow {
        int rank;
        std::size_t order;  // original position, to keep ties stable
        std::string label;
        std::string percent;
    };
    std::vector<PlotRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = rc::csv::split_line(lines[i]);
        if (fields.size() != 9) {
            throw std::invalid_argument("row " + std::to_string(i) + ": expected 9 fields, got " +
                                        std::to_string(fields.size()));
        }
        if (fields[0] != "single" && fields[0] != "multiple") {
            throw std::invalid_argument("row " + std::to_string(i) + ": unknown strategy '" +
                                        fields[0] + "'");
        }
        rc::csv::parse_double(fields[4], i, "percent_avoided");  // must parse
        rows.push_back({plot_rank(fields[0], fields[1]), i, plot_label(fields[0], fields[1]),
                        fields[4]});
    }
    if (rows.empty()) {
        throw std::invalid_argument(args.summary_path + ": summary has no data rows");
    }
    std::stable_sort(rows.begin(), rows.end(), [](const PlotRow& a, const PlotRow& b) {
        return a.rank != b.rank ? a.rank < b.rank : a.order < b.order;
    });
    std::string out = "strategy_label,percent_avoided\n";
    for (const auto& r : rows) out += r.label + "," + r.percent + "\n";
    rc::csv::write_file(args.out_path, out);
    std::printf("wrote %s (%zu rows)\n", args.out_path.c_str(), rows.size());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// demo: gen-data -> train -> control --all -> report, all under one seed

struct DemoArgs {
    std::string out_dir;
    std::uint64_t seed = 1;
    int n = 1000;
};

int run_demo(const DemoArgs& args) {
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);

    GenDataArgs gen;
    gen.n = args.n;
    gen.seed = args.seed;
    gen.out_path = (dir / "data.csv").string();
    if (const int code = run_gen_data(gen); code != kExitOk) return code;

    TrainArgs train;
    train.data_path = gen.out_path;
    train.model_out = (dir / "model.txt").string();
    train.seed = rc::mix_seed(args.seed, 1);
    if (const int code = run_train(train); code != kExitOk) return code;

    ControlArgs control;
    control.model_path = train.model_out;
    control.data_path = gen.out_path;
    control.all = true;
    control.seed = rc::mix_seed(args.seed, 2);
    control.summary_out = (dir / "summary.csv").string();
    control.detail_out = (dir / "detail.csv").string();
    if (const int code = run_control(control); code != kExitOk) return code;

    ReportArgs report;
    report.summary_path = control.summary_out;
    report.out_path = (dir / "plot.csv").string();
    return run_report(report);
}

// ---------------------------------------------------------------------------
// configuration files
//
// The contract is a flat key=value file per subcommand (no sections), so the
// file is expanded into ordinary --key=value tokens before parsing; CLI11 then
// validates values and rejects unknown keys exactly as it would for flags.
// Explicit command-line flags take precedence over file entries.

std::string trim(const std::string& s) {
    const auto from = s.find_first_not_of(" \t");
    if (from == std::string::npos) return "";
    const auto to = s.find_last_not_of(" \t");
    return s.substr(from, to - from + 1);
}

std::vector<std::string> expand_config_args(std::vector<std::string> args) {
    std::string path;
    std::size_t insert_at = 0;
    bool found = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::invalid_argument("--config requires a file path");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(std::string("--config=").size());
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            continue;
        }
        insert_at = i;
        found = true;
        break;
    }
    if (!found) return args;
    if (path.empty()) throw std::invalid_argument("--config requires a file path");
    if (insert_at == 0) {
        throw std::invalid_argument("--config belongs after a subcommand");
    }

    const auto lines = rc::csv::read_lines(path);
    std::vector<std::string> expanded;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string line = trim(lines[ln]);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw std::invalid_argument(path + " line " + std::to_string(ln + 1) +
                                        ": expected key=value");
        }
        const std::string flag = "--" + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const bool overridden =
            std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                return a == flag || a.rfind(flag + "=", 0) == 0;
            });
        if (!overridden) expanded.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at), expanded.begin(),
                expanded.end());
    return args;
}

void configure_common(CLI::App* cmd) {
    // recognized pre-parse by expand_config_args; registered here for --help
    cmd->add_option("--config",
                    "flat key=value configuration file (command-line flags take precedence)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rational-choice decision pipeline: rank alternatives, learn conflict risk, "
                 "and search for risk-minimizing interventions"};
    app.require_subcommand(1);

    RankArgs rank_args;
    auto* rank = app.add_subcommand("rank", "rank alternatives by inverse-cost utility");
    configure_common(rank);
    rank->add_option("--in", rank_args.in_path, "alternatives CSV (id,label,cost)")->required();
    rank->add_option("--out", rank_args.out_path, "ranked output CSV")->required();

    GenDataArgs gen_args;
    auto* gen = app.add_subcommand("gen-data", "generate synthetic dyadic conflict data");
    configure_common(gen);
    gen->add_option("--n", gen_args.n, "number of dyads")->required();
    gen->add_option("--seed", gen_args.seed, "generator seed")->required();
    gen->add_option("--noise-sd", gen_args.noise_sd,
                    "measurement noise, as a fraction of each feature's span");
    gen->add_option("--coefficients", gen_args.coefficients,
                    "generating logistic model: intercept + 7 weights")
        ->delimiter(',');
    gen->add_option("--out", gen_args.out_path, "output dyad CSV")->required();

    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "train the conflict risk network");
    configure_common(train);
    train->add_option("--data", train_args.data_path, "dyad CSV (panel or plain)")->required();
    train->add_option("--model-out", train_args.model_out, "model file to write")->required();
    train->add_option("--norm-out", train_args.norm_out,
                      "normalization file (default <model-out>.norm)");
    train->add_option("--loss-out", train_args.loss_out,
                      "loss curve CSV (default <model-out>.loss.csv)");
    train->add_option("--seed", train_args.seed, "weight initialization seed")->required();
    train->add_option("--lr", train_args.learning_rate, "gradient descent learning rate");
    train->add_option("--epochs", train_args.epochs, "training epochs");
    train->add_option("--hidden", train_args.hidden, "hidden layer width");
    train->add_option("--train-fraction", train_args.train_fraction,
                      "front fraction of rows used for training");
    train->add_option("--ensemble", train_args.ensemble,
                      "train K independently seeded networks, predict their mean");

    ControlArgs control_args;
    auto* control = app.add_subcommand("control", "search for risk-minimizing interventions");
    configure_common(control);
    control->add_option("--model", control_args.model_path, "trained model file")->required();
    control->add_option("--norm", control_args.norm_path,
                        "normalization file (default <model>.norm)");
    control->add_option("--data", control_args.data_path, "dyad CSV to control")->required();
    control->add_option("--strategy", control_args.strategy,
                        "single:<variable> or multiple:<var>+<var>+...");
    control->add_flag("--all", control_args.all,
                      "run all four single strategies plus the full multiple strategy");
    control->add_option("--seed", control_args.seed,
                        "simulated annealing seed (required for multiple strategies)");
    control->add_option("--sa-restarts", control_args.sa_restarts,
                        "simulated annealing multi-start count");
    control->add_option("--gss-tol", control_args.gss_tolerance,
                        "golden section search bracket tolerance");
    control->add_option("--out-summary", control_args.summary_out, "summary CSV")->required();
    control->add_option("--out-detail", control_args.detail_out,
                        "per-dyad detail CSV (strategy label spliced in under --all)");

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "reshape a summary CSV into plot data");
    configure_common(report);
    report->add_option("--summary", report_args.summary_path, "summary CSV from control")
        ->required();
    report->add_option("--out", report_args.out_path, "plot-ready CSV")->required();

    DemoArgs demo_args;
    auto* demo = app.add_subcommand(
        "demo", "end-to-end walkthrough: gen-data, train, control --all, report");
    configure_common(demo);
    demo->add_option("--out-dir", demo_args.out_dir, "directory for all outputs")->required();
    demo->add_option("--seed", demo_args.seed, "seed for the whole chain")->required();
    demo->add_option("--n", demo_args.n, "number of synthetic dyads");

    try {
        auto args = expand_config_args({argv + 1, argv + argc});
        std::reverse(args.begin(), args.end());  // CLI11's vector overload wants reversed args
        app.parse(std::move(args));
        if (rank->parsed()) return run_rank(rank_args);
        if (gen->parsed()) return run_gen_data(gen_args);
        if (train->parsed()) return run_train(train_args);
        if (control->parsed()) return run_control(control_args);
        if (report->parsed()) return run_report(report_args);
        if (demo->parsed()) return run_demo(demo_args);
        std::fprintf(stderr, "error: no subcommand given\n");
        return kExitInputError;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    } catch (const rc::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    }
}
