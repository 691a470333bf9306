#include "suprb/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "suprb/config_file.hpp"
#include "suprb/cross_validation.hpp"
#include "suprb/csv.hpp"
#include "suprb/errors.hpp"
#include "suprb/fitness.hpp"
#include "suprb/model_io.hpp"
#include "suprb/training.hpp"

namespace suprb {

namespace {

std::string real(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_score(std::ostream& out, const std::string& prefix, const Score& s)
{
    out << prefix << "mse=" << real(s.mse) << "\n"
        << prefix << "r2=" << real(s.r2) << "\n"
        << prefix << "complexity=" << s.complexity << "\n"
        << prefix << "pool_size=" << s.pool_size << "\n"
        << prefix << "mean_rule_volume=" << real(s.mean_rule_volume) << "\n";
}

std::string feature_label(const Model& model, std::size_t i)
{
    return model.feature_names.empty() ? "x" + std::to_string(i) : model.feature_names[i];
}

void print_rule(std::ostream& out, const Model& model, std::size_t k)
{
    const Rule& r = model.pool[k];
    out << "rule " << k << ": experience=" << r.experience << " error=" << real(r.in_sample_error)
        << " fitness=" << real(r.fitness)
        << " volume=" << real(volume_share(r.condition, model.feature_bounds)) << "\n";
    for (std::size_t i = 0; i < model.dims(); ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        out << "  " << feature_label(model, i) << " in [" << real(r.condition.lower[e]) << ", "
            << real(r.condition.upper[e]) << "]\n";
    }
    out << "  prediction = " << real(r.submodel.intercept);
    for (std::size_t i = 0; i < model.dims(); ++i) {
        const double c = r.submodel.coefficients[static_cast<Eigen::Index>(i)];
        out << (std::signbit(c) ? " - " : " + ") << real(std::abs(c)) << "*" << feature_label(model, i);
    }
    out << "\n";
}

struct Options {
    std::string data;
    std::string target;
    std::string config;
    std::string model;
    std::string out;
    std::string history;
    std::optional<std::uint64_t> seed;
    std::size_t folds = 5;
    bool no_header = false;
    bool all_rules = false;
};

TrainingConfig resolve_config(const Options& opt)
{
    TrainingConfig config = opt.config.empty() ? TrainingConfig{} : load_config(opt.config);
    if (opt.seed) {
        config.rng_seed = *opt.seed;
    }
    return config;
}

int cmd_fit(const Options& opt, std::ostream& out)
{
    const Dataset data = load_csv(opt.data, opt.target, !opt.no_header);
    const Model model = fit(data, resolve_config(opt));
    save_model(model, opt.model);

    if (!opt.history.empty()) {
        std::ofstream h(opt.history, std::ios::binary | std::ios::trunc);
        if (!h) {
            throw DataError("cannot write history file '" + opt.history + "'");
        }
        h << "phase,best_fitness,mse,complexity,pool_size\n";
        for (const auto& m : model.history) {
            h << m.phase << "," << real(m.best_fitness) << "," << real(m.mse) << "," << m.complexity << ","
              << m.pool_size << "\n";
        }
    }
    out << "rows=" << data.rows() << "\n";
    print_score(out, "train.", score(model, data));
    out << "phases=" << model.history.size() << "\n";
    return kExitOk;
}

int cmd_predict(const Options& opt, std::ostream& out)
{
    const Model model = load_model(opt.model);
    const auto table = read_csv(opt.data, !opt.no_header);
    const Matrix x = features_from_table(table, model.feature_names, model.dims());
    const Vector y = predict(model, x);

    std::ofstream file;
    if (!opt.out.empty()) {
        file.open(opt.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw DataError("cannot write predictions to '" + opt.out + "'");
        }
    }
    std::ostream& sink = opt.out.empty() ? out : file;
    sink << "prediction\n";
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        sink << real(y[j]) << "\n";
    }
    return kExitOk;
}

int cmd_eval(const Options& opt, std::ostream& out)
{
    const Model model = load_model(opt.model);
    const std::string target = opt.target.empty() ? model.target_name : opt.target;
    const Dataset data = load_csv(opt.data, target, !opt.no_header);
    out << "rows=" << data.rows() << "\n";
    print_score(out, "", score(model, data));
    return kExitOk;
}

int cmd_cv(const Options& opt, std::ostream& out)
{
    const Dataset data = load_csv(opt.data, opt.target, !opt.no_header);
    const TrainingConfig config = resolve_config(opt);
    const auto results = cross_validate(data, config, opt.folds, opt.seed.value_or(config.rng_seed));

    std::vector<double> mse;
    std::vector<double> r2;
    std::vector<double> complexity;
    for (std::size_t f = 0; f < results.size(); ++f) {
        const std::string prefix = "fold." + std::to_string(f) + ".";
        out << prefix << "train_rows=" << results[f].train_rows << "\n"
            << prefix << "test_rows=" << results[f].test_rows << "\n";
        print_score(out, prefix, results[f].test);
        mse.push_back(results[f].test.mse);
        r2.push_back(results[f].test.r2);
        complexity.push_back(static_cast<double>(results[f].test.complexity));
    }
    auto summarize = [&](const std::string& name, const std::vector<double>& v) {
        double mean = 0.0;
        for (const double x : v) {
            mean += x;
        }
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (const double x : v) {
            var += (x - mean) * (x - mean);
        }
        var /= static_cast<double>(v.size() - 1);
        out << "mean." << name << "=" << real(mean) << "\n"
            << "std." << name << "=" << real(std::sqrt(var)) << "\n";
    };
    summarize("mse", mse);
    summarize("r2", r2);
    summarize("complexity", complexity);
    return kExitOk;
}

int cmd_inspect(const Options& opt, std::ostream& out)
{
    const Model model = load_model(opt.model);
    out << "model: " << model.best.complexity << " of " << model.pool.size() << " pool rules selected, "
        << model.dims() << " features";
    if (!model.target_name.empty()) {
        out << ", target " << model.target_name;
    }
    out << "\n"
        << "candidate: mse=" << real(model.best.mse) << " fitness=" << real(model.best.fitness) << "\n"
        << "default prediction (no rule matches): " << real(model.default_prediction) << "\n";
    for (std::size_t k = 0; k < model.pool.size(); ++k) {
        if (opt.all_rules || model.best.genome[k]) {
            out << "\n";
            print_rule(out, model, k);
        }
    }
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Rule-based regression with separated rule discovery and solution composition", "suprb"};
    app.require_subcommand(1);
    Options opt;

    auto* fit_cmd = app.add_subcommand("fit", "Train a model and write it to a file");
    fit_cmd->add_option("--data", opt.data, "Training CSV")->required();
    fit_cmd->add_option("--target", opt.target, "Target column name or zero-based index")->required();
    fit_cmd->add_option("--config", opt.config, "Config file (dotted key = value lines)");
    fit_cmd->add_option("--out", opt.model, "Model output path")->required();
    fit_cmd->add_option("--seed", opt.seed, "Overrides rng_seed from the config");
    fit_cmd->add_option("--history", opt.history, "Write per-phase metrics as CSV");
    fit_cmd->add_flag("--no-header", opt.no_header, "The CSV has no header line");

    auto* predict_cmd = app.add_subcommand("predict", "Predict targets for a feature CSV");
    predict_cmd->add_option("--model", opt.model, "Model file")->required();
    predict_cmd->add_option("--data", opt.data, "Feature CSV")->required();
    predict_cmd->add_option("--out", opt.out, "Prediction CSV (default: standard output)");
    predict_cmd->add_flag("--no-header", opt.no_header, "The CSV has no header line");

    auto* eval_cmd = app.add_subcommand("eval", "Print metrics of a model on a labelled CSV");
    eval_cmd->add_option("--model", opt.model, "Model file")->required();
    eval_cmd->add_option("--data", opt.data, "Labelled CSV")->required();
    eval_cmd->add_option("--target", opt.target, "Target column (default: the training target)");
    eval_cmd->add_flag("--no-header", opt.no_header, "The CSV has no header line");

    auto* cv_cmd = app.add_subcommand("cv", "K-fold cross-validation");
    cv_cmd->add_option("--data", opt.data, "Labelled CSV")->required();
    cv_cmd->add_option("--target", opt.target, "Target column name or zero-based index")->required();
    cv_cmd->add_option("--config", opt.config, "Config file");
    cv_cmd->add_option("--folds", opt.folds, "Number of folds")->check(CLI::Range(2, 1000000));
    cv_cmd->add_option("--seed", opt.seed, "Seed for the partition and the per-fold training");
    cv_cmd->add_flag("--no-header", opt.no_header, "The CSV has no header line");

    auto* inspect_cmd = app.add_subcommand("inspect", "List the rules of a model");
    inspect_cmd->add_option("--model", opt.model, "Model file")->required();
    inspect_cmd->add_flag("--all", opt.all_rules, "List the whole pool, not just selected rules");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUsage;
    }

    try {
        if (fit_cmd->parsed()) {
            return cmd_fit(opt, out);
        }
        if (predict_cmd->parsed()) {
            return cmd_predict(opt, out);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(opt, out);
        }
        if (cv_cmd->parsed()) {
            return cmd_cv(opt, out);
        }
        return cmd_inspect(opt, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
}

} // namespace suprb
