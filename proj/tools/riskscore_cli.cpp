// Command-line front end: one subcommand per experiment family.
// Exit codes: 0 success, 1 internal failure, 2 user/config error.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "riskscore/additive_stumps.hpp"
#include "riskscore/cart.hpp"
#include "riskscore/cross_validation.hpp"
#include "riskscore/csv.hpp"
#include "riskscore/dataset.hpp"
#include "riskscore/errors.hpp"
#include "riskscore/fairness.hpp"
#include "riskscore/psa.hpp"
#include "riskscore/riskslim.hpp"
#include "riskscore/scoring_table.hpp"
#include "riskscore/stumps.hpp"
#include "riskscore/synth.hpp"
#include "riskscore/text.hpp"
#include "riskscore/train_config.hpp"
#include "riskscore/version.hpp"

using json = nlohmann::json;
using namespace riskscore;

namespace {

std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// Every run leaves a manifest next to its primary output so the exact
// invocation can be replayed.
void write_manifest(const std::string& command, const std::string& output,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const std::string& config,
                    std::uint64_t seed) {
    json doc;
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["config"] = config;
    doc["seed"] = seed;
    doc["inputs"] = inputs;
    doc["outputs"] = outputs;
    doc["timestamp"] = now_iso8601();
    std::ofstream out(output + ".manifest.json");
    if (!out) throw UserError("cannot write manifest for " + output);
    out << doc.dump(2) << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UserError("cannot write " + path);
    out << text;
}

TrainConfig load_train_config(const std::string& path, std::uint64_t seed_flag,
                              bool seed_set) {
    TrainConfig config = path.empty() ? TrainConfig{} : TrainConfig::from_file(path);
    if (seed_set) config.seed = seed_flag;
    config.validate();
    return config;
}

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path;
    return path.substr(0, dot);
}

json fold_json(const FoldResult& fold) {
    json f;
    f["fold"] = fold.fold;
    if (fold.skipped) {
        f["skipped"] = true;
        f["reason"] = fold.skip_reason;
    } else {
        f["auc"] = fold.auc;
        f["params"] = fold.params.describe();
    }
    return f;
}

FairnessThresholds parse_thresholds(const std::string& spec) {
    FairnessThresholds t;
    if (spec.empty()) return t;
    for (const auto& part : split(spec, ',')) {
        auto kv = split(trim(part), '=');
        if (kv.size() != 2)
            throw ConfigError("--thresholds expects key=value pairs, got '" +
                              std::string(part) + "'");
        std::string key(trim(kv[0]));
        double value = parse_double(kv[1], "--thresholds " + key);
        if (key == "calibration")
            t.calibration_gap = value;
        else if (key == "balance")
            t.probability_balance = value;
        else if (key == "raw_balance")
            t.raw_balance = value;
        else if (key == "auc_range")
            t.auc_range = value;
        else if (key == "monotonic")
            t.monotonic_tolerance = value;
        else if (key == "min_cell")
            t.min_cell_count = static_cast<int>(value);
        else if (key == "bins")
            t.probability_bins = static_cast<int>(value);
        else
            throw ConfigError("unknown threshold key '" + key + "'");
    }
    return t;
}

struct CommonFlags {
    std::string input, schema_path, output, config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool convicted_only = false;
};

Dataset load_input(const CommonFlags& flags) {
    Schema schema = Schema::load(flags.schema_path);
    LoadOptions options;
    options.convicted_only = flags.convicted_only;
    return Dataset::load(flags.input, schema, options);
}

int cmd_synth(const std::string& config_path, long n, const std::string& output,
              std::uint64_t seed, bool seed_set, const std::string& schema_out) {
    SynthConfig config = config_path.empty() ? SynthConfig{}
                                             : SynthConfig::from_file(config_path);
    if (seed_set) config.seed = seed;
    if (n <= 0) throw ConfigError("--n must be positive");
    Dataset data = synthesize(config, static_cast<size_t>(n));
    data.save(output);
    std::string schema_path = schema_out.empty() ? output + ".schema" : schema_out;
    data.schema().save(schema_path);
    write_manifest("synth", output, {}, {output, schema_path}, config_path, config.seed);
    std::cout << "wrote " << data.size() << " records to " << output << "\n";
    return 0;
}

int cmd_featurize(const CommonFlags& flags, const std::string& basis_path,
                  const std::string& basis_out) {
    Dataset data = load_input(flags);
    if (data.size() == 0) throw UserError("input has no records");
    StumpBasis basis =
        basis_path.empty() ? StumpBasis::defaults(data) : StumpBasis::load(basis_path);
    StumpMatrix matrix = expand(data, basis);
    save_stump_matrix_csv(flags.output, matrix);
    std::vector<std::string> outputs = {flags.output};
    if (!basis_out.empty()) {
        basis.save(basis_out);
        outputs.push_back(basis_out);
    }
    write_manifest("featurize", flags.output, {flags.input, flags.schema_path}, outputs,
                   basis_path, flags.seed);
    std::cout << "wrote " << matrix.rows << " x " << matrix.cols << " stump matrix to "
              << flags.output << "\n";
    return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& kind, const std::string& label,
              const std::string& basis_path) {
    Dataset data = load_input(flags);
    if (data.size() == 0) throw UserError("input has no records");
    TrainConfig config = load_train_config(flags.config, flags.seed, flags.seed_set);
    std::vector<int> rows(data.size());
    std::iota(rows.begin(), rows.end(), 0);

    StumpBasis basis;
    bool need_basis = kind == "stumps" || kind == "riskslim";
    if (need_basis)
        basis = basis_path.empty() ? StumpBasis::defaults(data)
                                   : StumpBasis::load(basis_path);

    std::vector<std::string> outputs = {flags.output};
    if (kind == "riskslim") {
        RiskSlimModel model = fit_riskslim_lite(data, rows, basis, label, config);
        model.table.save(flags.output);
        model.table.save(flags.output + ".json");
        outputs.push_back(flags.output + ".json");
        std::cout << "rows " << model.table.rows.size() << ", intercept "
                  << model.table.intercept << ", objective "
                  << format_number(model.fit.objective) << ", gap "
                  << format_number(model.fit.gap)
                  << (model.fit.proven_optimal ? " (optimal)" : "") << "\n";
    } else if (kind == "stumps") {
        AdditiveStumpsModel model =
            fit_additive_stumps(data, rows, basis, label, config);
        save_coefficient_csv(flags.output, [&] {
            std::vector<std::string> names;
            for (const auto& c : model.columns) names.push_back(c.name);
            return names;
        }(), model.model.coefficients, model.model.intercept);
        std::string curves_path = stem_of(flags.output) + ".curves.csv";
        std::string curves = "feature,value,contribution\n";
        for (const auto& [feature, points] : model.curves)
            for (const auto& p : points)
                curves += feature + "," + format_number(p.value) + "," +
                          format_number(p.contribution) + "\n";
        write_text(curves_path, curves);
        outputs.push_back(curves_path);
        std::cout << "C " << format_number(model.chosen_C) << ", stumps "
                  << model.model.nonzero_count() << ", original features "
                  << model.used_features.size() << "\n";
    } else if (kind == "cart") {
        auto X = data.feature_matrix(rows);
        auto y = data.label_column(label, rows);
        size_t positives = 0;
        for (int v : y) positives += v != 0;
        if (positives == 0 || positives == y.size())
            throw DegenerateLabelError("labels contain a single class");
        CartConfig cart;
        cart.max_depth = static_cast<int>(config.depth_grid.front());
        cart.min_gain = config.min_gain;
        cart.min_leaf = config.min_leaf;
        MatrixView view{X.values.data(), X.rows, X.cols};
        CartModel model = fit_cart(view, y, X.column_names, cart);
        write_text(flags.output, model.to_text());
        std::cout << "tree with " << model.nodes.size() << " nodes\n";
    } else if (kind == "l1" || kind == "l2") {
        auto X = data.feature_matrix(rows);
        auto y = data.label_column(label, rows);
        Penalty penalty = kind == "l1" ? Penalty::L1 : Penalty::L2;
        MatrixView view{X.values.data(), X.rows, X.cols};
        LogisticModel model = fit_logistic(
            view, y,
            config.logistic(penalty, config.penalty_grid.back(), config.standardize));
        save_coefficient_csv(flags.output, X.column_names, model.coefficients,
                             model.intercept);
        std::cout << "nonzero coefficients " << model.nonzero_count() << ", converged "
                  << (model.converged ? "yes" : "no") << "\n";
    } else {
        throw ConfigError("unknown model kind '" + kind + "'");
    }
    write_manifest("train", flags.output, {flags.input, flags.schema_path}, outputs,
                   flags.config, config.seed);
    return 0;
}

int cmd_cv(const CommonFlags& flags, const std::string& kind, const std::string& label,
           const std::string& basis_path, bool stratify, int folds) {
    Dataset data = load_input(flags);
    TrainConfig config = load_train_config(flags.config, flags.seed, flags.seed_set);
    std::shared_ptr<const StumpBasis> basis;
    if (!basis_path.empty())
        basis = std::make_shared<StumpBasis>(StumpBasis::load(basis_path));
    auto trainer = make_trainer(kind, config, basis);
    HyperGrid grid = default_grid(kind, config);
    CVOptions options;
    options.folds = folds;
    options.seed = config.seed;
    options.stratify = stratify || config.stratify;
    CVResult result = nested_cv(data, label, *trainer, grid, options);

    json doc;
    doc["label"] = label;
    doc["model"] = kind;
    doc["seed"] = config.seed;
    doc["folds"] = json::array();
    for (const auto& fold : result.folds) doc["folds"].push_back(fold_json(fold));
    doc["mean_auc"] = result.mean_auc;
    doc["std_auc"] = result.std_auc;
    doc["skipped"] = result.skipped_count;
    write_text(flags.output, doc.dump(2) + "\n");

    std::string csv_path = stem_of(flags.output) + ".csv";
    write_text(csv_path, "label,model,mean_auc,std_auc\n" + label + "," + kind + "," +
                             format_number(result.mean_auc) + "," +
                             format_number(result.std_auc) + "\n");
    write_manifest("cv", flags.output, {flags.input, flags.schema_path},
                   {flags.output, csv_path}, flags.config, config.seed);
    std::cout << "mean AUC " << format_number(result.mean_auc) << " (std "
              << format_number(result.std_auc) << ", skipped " << result.skipped_count
              << " of " << result.folds.size() << " folds)\n";
    return 0;
}

int cmd_xregion(const CommonFlags& flags, const std::string& target_path,
                const std::string& target_schema, const std::string& kind,
                const std::string& label, bool stratify, int folds) {
    Dataset source = load_input(flags);
    Schema tgt_schema = Schema::load(target_schema);
    LoadOptions options;
    options.convicted_only = flags.convicted_only;
    Dataset target = Dataset::load(target_path, tgt_schema, options);
    TrainConfig config = load_train_config(flags.config, flags.seed, flags.seed_set);
    auto trainer = make_trainer(kind, config, nullptr);
    HyperGrid grid = default_grid(kind, config);
    CVOptions cv_options;
    cv_options.folds = folds;
    cv_options.seed = config.seed;
    cv_options.stratify = stratify || config.stratify;
    XRegionResult result =
        cross_region(source, target, label, *trainer, grid, cv_options);

    json doc;
    doc["label"] = label;
    doc["model"] = kind;
    doc["seed"] = config.seed;
    doc["shared_features"] = result.shared_features;
    doc["target_auc"] = json::array();
    for (const auto& fold : result.target_auc) doc["target_auc"].push_back(fold_json(fold));
    doc["source_holdout_auc"] = json::array();
    for (const auto& fold : result.source_holdout_auc)
        doc["source_holdout_auc"].push_back(fold_json(fold));
    doc["mean_target_auc"] = result.mean_target;
    doc["std_target_auc"] = result.std_target;
    doc["mean_source_holdout_auc"] = result.mean_source;
    doc["std_source_holdout_auc"] = result.std_source;
    write_text(flags.output, doc.dump(2) + "\n");
    write_manifest("xregion", flags.output,
                   {flags.input, flags.schema_path, target_path, target_schema},
                   {flags.output}, flags.config, config.seed);
    std::cout << "target mean AUC " << format_number(result.mean_target)
              << ", source holdout mean AUC " << format_number(result.mean_source) << "\n";
    return 0;
}

int cmd_psa(const CommonFlags& flags) {
    Dataset data = load_input(flags);
    PsaNcaModel nca;
    PsaNvcaModel nvca;
    std::string out = "person_id,nca_raw,nca_scaled,nvca_raw,nvca_flag\n";
    int id_col = data.schema().index("person_id");
    for (size_t r = 0; r < data.size(); ++r) {
        RecordView record = data.record(r);
        NcaResult a = nca.score(record);
        NvcaResult v = nvca.score(record);
        std::string id = id_col >= 0 ? data.string_at(r, id_col) : std::to_string(r);
        out += csv_escape(id) + "," + std::to_string(a.raw_points) + "," +
               std::to_string(a.scaled) + "," + std::to_string(v.raw_points) + "," +
               (v.flag ? "yes" : "no") + "\n";
    }
    write_text(flags.output, out);
    write_manifest("psa", flags.output, {flags.input, flags.schema_path}, {flags.output},
                   "", flags.seed);
    std::cout << "scored " << data.size() << " records\n";
    return 0;
}

int cmd_audit(const std::string& input, const std::string& attribute,
              const std::string& output, const std::string& score_col,
              const std::string& label_col, const std::string& kind_flag,
              const std::string& thresholds_flag, const std::string& curves_path) {
    CsvTable table = read_csv(input);
    int score_idx = table.column(score_col);
    int label_idx = table.column(label_col);
    int group_idx = table.column(attribute);
    if (score_idx < 0) throw SchemaError(input + ": missing score column '" + score_col + "'");
    if (label_idx < 0) throw SchemaError(input + ": missing label column '" + label_col + "'");
    if (group_idx < 0) throw SchemaError(input + ": missing attribute column '" + attribute + "'");

    GroupedScores grouped;
    grouped.kind = kind_flag == "raw" ? ScoreKind::RawInteger : ScoreKind::Probability;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        std::string where = input + " row " + std::to_string(r + 1);
        grouped.scores.push_back(parse_double(row[score_idx], where + " score"));
        double label = parse_double(row[label_idx], where + " label");
        if (label != 0.0 && label != 1.0)
            throw ValidationError(where + ": label must be 0 or 1");
        grouped.labels.push_back(label != 0.0 ? 1 : 0);
        grouped.groups.push_back(row[group_idx]);
    }

    FairnessThresholds thresholds = parse_thresholds(thresholds_flag);
    FairnessReport report = audit(grouped, thresholds);
    write_text(output, report.to_json_text());
    std::vector<std::string> outputs = {output};
    if (!curves_path.empty()) {
        write_text(curves_path, report.curves_csv());
        outputs.push_back(curves_path);
    }
    write_manifest("audit", output, {input}, outputs, "", 0);
    std::cout << report.summary_text();
    for (const auto& warning : report.balance.warnings)
        std::cout << "warning: " << warning << "\n";
    for (const auto& note : report.bg_auc.excluded) std::cout << "warning: " << note << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable recidivism risk scoring toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;
    long synth_n = 0;
    std::string kind, label, basis_path, basis_out, schema_out;
    std::string target_path, target_schema;
    std::string attribute, score_col = "score", label_col = "label";
    std::string score_kind = "probability", thresholds_flag, curves_path;
    bool stratify = false;
    int folds = 5;

    auto add_common = [&](CLI::App* cmd, bool needs_schema = true) {
        cmd->add_option("--input", flags.input, "input CSV")->required();
        if (needs_schema)
            cmd->add_option("--schema", flags.schema_path, "schema file")->required();
        cmd->add_option("--output", flags.output, "output path")->required();
        cmd->add_option("--seed", flags.seed, "random seed")
            ->each([&](const std::string&) { flags.seed_set = true; });
        cmd->add_flag("--convicted-only", flags.convicted_only,
                      "count only convicted charges when deriving labels");
    };

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--config", flags.config, "generator profile");
    synth->add_option("--n", synth_n, "number of records")->required();
    synth->add_option("--output", flags.output, "output CSV")->required();
    synth->add_option("--seed", flags.seed, "random seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
    synth->add_option("--schema-out", schema_out, "where to write the schema");

    CLI::App* featurize = app.add_subcommand("featurize", "expand features into stumps");
    add_common(featurize);
    featurize->add_option("--basis", basis_path, "stump basis file");
    featurize->add_option("--basis-out", basis_out, "write the basis used");

    CLI::App* train = app.add_subcommand("train", "fit a model");
    add_common(train);
    train->add_option("--model", kind, "l1|l2|stumps|riskslim|cart")->required();
    train->add_option("--label", label, "label name")->required();
    train->add_option("--config", flags.config, "training config");
    train->add_option("--basis", basis_path, "stump basis file");

    CLI::App* cv = app.add_subcommand("cv", "five-fold nested cross validation");
    add_common(cv);
    cv->add_option("--model", kind, "l1|l2|stumps|riskslim|cart")->required();
    cv->add_option("--label", label, "label name")->required();
    cv->add_option("--config", flags.config, "training config");
    cv->add_option("--basis", basis_path, "stump basis file");
    cv->add_flag("--stratify", stratify, "stratify folds by label");
    cv->add_option("--folds", folds, "fold count (default 5)");

    CLI::App* xregion = app.add_subcommand("xregion", "train on one region, test on another");
    add_common(xregion);
    xregion->add_option("--target", target_path, "target region CSV")->required();
    xregion->add_option("--target-schema", target_schema, "target schema")->required();
    xregion->add_option("--model", kind, "l1|l2|stumps|riskslim|cart")->required();
    xregion->add_option("--label", label, "label name")->required();
    xregion->add_option("--config", flags.config, "training config");
    xregion->add_flag("--stratify", stratify, "stratify folds by label");
    xregion->add_option("--folds", folds, "fold count (default 5)");

    CLI::App* psa = app.add_subcommand("psa", "score records with the PSA point tables");
    add_common(psa);

    CLI::App* audit_cmd = app.add_subcommand("audit", "fairness audit of scored records");
    audit_cmd->add_option("--input", flags.input, "scored CSV")->required();
    audit_cmd->add_option("--attribute", attribute, "sensitive attribute column")->required();
    audit_cmd->add_option("--output", flags.output, "report JSON path")->required();
    audit_cmd->add_option("--score-col", score_col, "score column (default score)");
    audit_cmd->add_option("--label-col", label_col, "label column (default label)");
    audit_cmd->add_option("--score-kind", score_kind, "probability|raw");
    audit_cmd->add_option("--thresholds", thresholds_flag,
                          "overrides, e.g. calibration=0.03,raw_balance=0.4");
    audit_cmd->add_option("--curves-csv", curves_path, "also write curve CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed())
            return cmd_synth(flags.config, synth_n, flags.output, flags.seed,
                             flags.seed_set, schema_out);
        if (featurize->parsed()) return cmd_featurize(flags, basis_path, basis_out);
        if (train->parsed()) return cmd_train(flags, kind, label, basis_path);
        if (cv->parsed()) return cmd_cv(flags, kind, label, basis_path, stratify, folds);
        if (xregion->parsed())
            return cmd_xregion(flags, target_path, target_schema, kind, label, stratify,
                               folds);
        if (psa->parsed()) return cmd_psa(flags);
        if (audit_cmd->parsed())
            return cmd_audit(flags.input, attribute, flags.output, score_col, label_col,
                             score_kind, thresholds_flag, curves_path);
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
