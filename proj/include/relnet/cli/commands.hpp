#pragma once

// Pipeline stages behind the `relnet` command-line tool. Each stage takes a
// fully resolved parameter object, writes its artifacts under params["out"]
// and records a run.json manifest there; feeding that manifest back as
// --config reproduces the run.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relnet/data/csv.hpp"
#include "relnet/data/dataset.hpp"
#include "relnet/data/encode.hpp"
#include "relnet/data/sampling.hpp"
#include "relnet/data/schema.hpp"
#include "relnet/data/synth.hpp"
#include "relnet/errors.hpp"
#include "relnet/eval.hpp"
#include "relnet/mh_sampler.hpp"
#include "relnet/mlp.hpp"
#include "relnet/relational_network.hpp"

namespace relnet::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kUsage = 2,  // I/O or argument errors
    kBalance = 3,
    kSchemaMismatch = 4,
    kModelKind = 5,
};

// ---- defaults --------------------------------------------------------------

inline json synth_defaults() {
    return {{"n", 6000},          {"positive_rate", 0.25}, {"seed", 0},    {"planted", json::array()},
            {"noise", 0.05},      {"test_size", nullptr},  {"schema", ""}, {"out", ""}};
}

inline json train_defaults() {
    return {{"data", ""},           {"schema", ""},      {"model", "relnet"},       {"activation", "linear"},
            {"mode", "all-features"}, {"target", ""},    {"seed", 0},               {"iterations", 20000},
            {"step", 0.05},         {"temperature", 0.01}, {"trace_stride", 1},     {"hidden", 17},
            {"cycles", 1000},       {"learning_rate", 0.01}, {"momentum", 0.9},     {"out", ""}};
}

inline json eval_defaults() {
    return {{"models", json::array()}, {"names", json::array()}, {"data", ""}, {"schema", ""}, {"out", ""}};
}

inline json relations_defaults() {
    return {{"model", ""}, {"target", ""}, {"schema", ""}, {"out", ""}};
}

inline json reproduce_defaults() {
    return {{"out", ""},
            {"seed", 7},
            {"n", 6000},
            {"test_size", 1500},
            {"positive_rate", 0.25},
            {"planted", json::array({json{{"from", "Age"}, {"to", "HIV"}, {"coefficient", 1.0}}})},
            {"noise", 0.05},
            {"schema", ""},
            {"iterations", 20000},
            // Cooler and finer than the sampler defaults: with six nodes the
            // chain moves 30 weights per proposal.
            {"step", 0.01},
            {"temperature", 0.0001},
            {"hidden", 17},
            {"cycles", 1000},
            {"learning_rate", 0.01},
            {"momentum", 0.9}};
}

inline json defaults_for(const std::string& command) {
    if (command == "synth") return synth_defaults();
    if (command == "train") return train_defaults();
    if (command == "eval") return eval_defaults();
    if (command == "relations") return relations_defaults();
    if (command == "reproduce") return reproduce_defaults();
    throw std::invalid_argument("unknown command '" + command + "'");
}

// ---- file helpers ----------------------------------------------------------

inline void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
}

inline void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("malformed JSON in '" + path.string() + "': " + e.what());
    }
}

/// Values from a --config file (a run.json manifest or a bare parameter
/// object) layered over the command defaults.
inline json merge_config(json params, const fs::path& config_path) {
    json cfg = read_json(config_path);
    if (cfg.contains("params")) cfg = cfg["params"];
    if (!cfg.is_object()) throw IoError("config '" + config_path.string() + "' is not a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        if (!params.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
        params[key] = value;
    }
    return params;
}

inline fs::path require_out(const json& p) {
    const auto out = p.at("out").get<std::string>();
    if (out.empty()) throw std::invalid_argument("--out is required");
    fs::create_directories(out);
    return out;
}

inline data::FeatureSchema resolve_schema(const json& p) {
    const auto path = p.value("schema", std::string{});
    if (path.empty()) return data::default_schema();
    return data::load_schema(path);
}

inline data::Dataset load_dataset(const std::string& path, const data::FeatureSchema& schema) {
    if (path.empty()) throw std::invalid_argument("--data is required");
    return data::build_dataset(data::read_csv(path, schema), schema);
}

inline std::vector<data::PlantedDependency> planted_from(const json& p) {
    return p.at("planted").get<std::vector<data::PlantedDependency>>();
}

inline void write_manifest(const fs::path& out, const std::string& command, const json& params,
                           const json& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["params"] = params;
    manifest["outputs"] = outputs;
    write_json(out / "run.json", manifest);
}

// ---- synth -----------------------------------------------------------------

inline json run_synth(const json& p, std::ostream& log) {
    const auto out = require_out(p);
    const auto schema = resolve_schema(p);
    data::SynthConfig cfg;
    cfg.n = p.at("n").get<std::size_t>();
    cfg.positive_rate = p.at("positive_rate").get<double>();
    cfg.planted = planted_from(p);
    cfg.noise_std = p.at("noise").get<double>();
    cfg.seed = p.at("seed").get<std::uint64_t>();
    const auto ds = data::synth_generate(schema, cfg);

    data::write_csv((out / "data.csv").string(), schema, ds.complete);
    {
        std::ofstream enc(out / "encoded.csv", std::ios::binary);
        if (!enc) throw IoError("cannot write encoded.csv");
        data::write_encoded_csv(enc, schema, ds.complete);
    }
    write_json(out / "encoded.json", data::encoded_manifest(ds, cfg.seed));

    json outputs{{"data", "data.csv"},
                 {"encoded", "encoded.csv"},
                 {"encoded_manifest", "encoded.json"},
                 {"records", ds.complete.size()},
                 {"positive", ds.positive_count()}};

    if (!p.at("test_size").is_null()) {
        const auto parts = data::split(ds.complete, p.at("test_size").get<std::size_t>(), cfg.seed);
        data::write_csv((out / "train.csv").string(), schema, parts.train);
        data::write_csv((out / "test.csv").string(), schema, parts.test);
        outputs["train"] = "train.csv";
        outputs["test"] = "test.csv";
        outputs["train_records"] = parts.train.size();
        outputs["test_records"] = parts.test.size();
    }
    write_manifest(out, "synth", p, outputs);
    log << "synth: wrote " << ds.complete.size() << " records (" << ds.positive_count() << " positive) to "
        << out.string() << "\n";
    return outputs;
}

// ---- train -----------------------------------------------------------------

inline json run_train(const json& p, std::ostream& log) {
    const auto schema = resolve_schema(p);
    const auto kind = p.at("model").get<std::string>();
    if (kind != "relnet" && kind != "mlp") {
        throw std::invalid_argument("--model must be relnet or mlp, got '" + kind + "'");
    }
    const auto ds = load_dataset(p.at("data").get<std::string>(), schema);
    const auto out = require_out(p);
    const auto seed = p.at("seed").get<std::uint64_t>();

    const auto balanced =
        data::balance(ds.complete, [&](const data::CompleteRecord& r) { return ds.label_of(r); }, seed);

    json report;
    report["model"] = kind;
    report["train_records"] = balanced.size();
    report["incomplete_skipped"] = ds.incomplete.size();

    if (kind == "relnet") {
        auto target_name = p.at("target").get<std::string>();
        if (target_name.empty()) target_name = schema.target_name;
        SamplerConfig cfg;
        cfg.seed = seed;
        cfg.max_iterations = p.at("iterations").get<std::size_t>();
        cfg.step_scale = p.at("step").get<double>();
        cfg.temperature = p.at("temperature").get<double>();
        cfg.mode = parse_error_mode(p.at("mode").get<std::string>());
        cfg.target = schema.index_of(target_name);
        cfg.trace_stride = p.at("trace_stride").get<std::size_t>();
        const auto activation = parse_activation(p.at("activation").get<std::string>());

        auto result = train(schema.names(), data::encode_relnet(schema, balanced), activation, cfg);
        write_json(out / "model.json", to_json(result.network));
        report["activation"] = std::string(to_string(activation));
        report["mode"] = std::string(to_string(cfg.mode));
        report["target"] = target_name;
        const json trained = to_json(result.report);
        for (const auto& [k, v] : trained.items()) report[k] = v;
        log << "train: relnet/" << to_string(activation) << " best error " << result.report.best_error << " ("
            << result.report.accepted_count << " of " << result.report.iterations_run << " proposals accepted)\n";
    } else {
        TrainingConfig cfg;
        cfg.cycles = p.at("cycles").get<std::size_t>();
        cfg.learning_rate = p.at("learning_rate").get<double>();
        cfg.momentum = p.at("momentum").get<double>();
        cfg.seed = seed;
        const auto hidden = p.at("hidden").get<std::size_t>();
        const auto view = data::encode_mlp(schema, balanced);
        const auto model = train_mlp(view.inputs, view.labels, cfg, hidden);
        write_json(out / "model.json", to_json(model));

        double loss = 0.0;
        std::vector<int> predicted;
        predicted.reserve(view.labels.size());
        for (std::size_t r = 0; r < view.inputs.rows(); ++r) {
            const auto c = classify_mlp(model, view.inputs.row(r));
            loss += (c.raw - view.labels[r]) * (c.raw - view.labels[r]);
            predicted.push_back(c.label);
        }
        report["d"] = model.input_dim();
        report["M"] = model.hidden_dim();
        report["cycles"] = cfg.cycles;
        report["train_mse"] = loss / static_cast<double>(view.labels.size());
        report["train_accuracy"] = accuracy(confusion(view.labels, predicted));
        log << "train: mlp d=" << model.input_dim() << " M=" << model.hidden_dim() << " training mse "
            << report["train_mse"].get<double>() << "\n";
    }
    write_json(out / "report.json", report);
    const json outputs{{"model", "model.json"}, {"report", "report.json"}};
    write_manifest(out, "train", p, outputs);
    return outputs;
}

// ---- eval ------------------------------------------------------------------

/// A model file of either family.
struct LoadedModel {
    std::optional<RelationalNetwork> relnet;
    std::optional<MlpModel> mlp;

    std::string default_name() const {
        return relnet ? "relnet-" + std::string(to_string(relnet->activation())) : std::string("mlp");
    }
};

inline LoadedModel load_model(const fs::path& path) {
    const json j = read_json(path);
    try {
        if (j.contains("node_names")) return {relational_network_from_json(j), std::nullopt};
        if (j.contains("w1")) return {std::nullopt, mlp_from_json(j)};
    } catch (const json::exception& e) {
        throw IoError("malformed model file '" + path.string() + "': " + e.what());
    }
    throw IoError("'" + path.string() + "' is neither a relational network nor an MLP model");
}

inline json run_eval(const json& p, std::ostream& log) {
    const auto schema = resolve_schema(p);
    const auto model_paths = p.at("models").get<std::vector<std::string>>();
    const auto names = p.at("names").get<std::vector<std::string>>();
    if (model_paths.empty()) throw std::invalid_argument("at least one --model is required");
    if (!names.empty() && names.size() != model_paths.size()) {
        throw std::invalid_argument("--name must be given once per --model");
    }
    std::vector<LoadedModel> models;
    for (const auto& path : model_paths) models.push_back(load_model(path));

    const auto ds = load_dataset(p.at("data").get<std::string>(), schema);
    if (ds.complete.empty()) throw IoError("test data contains no complete records");
    const auto out = require_out(p);

    const auto target = schema.target_index();
    const auto relnet_view = data::encode_relnet(schema, ds.complete);
    const auto mlp_view = data::encode_mlp(schema, ds.complete);
    const auto& truth = mlp_view.labels;

    std::vector<NamedMatrix> matrices;
    for (std::size_t i = 0; i < models.size(); ++i) {
        const auto& m = models[i];
        std::vector<int> predicted;
        predicted.reserve(truth.size());
        if (m.relnet) {
            if (m.relnet->node_names() != schema.names()) {
                throw SchemaMismatch("model '" + model_paths[i] + "' nodes do not match the data schema");
            }
            for (std::size_t r = 0; r < relnet_view.rows(); ++r) {
                predicted.push_back(classify_target(*m.relnet, relnet_view.row(r), target).label);
            }
        } else {
            if (m.mlp->input_dim() != mlp_view.inputs.cols()) {
                throw SchemaMismatch("model '" + model_paths[i] + "' expects " +
                                     std::to_string(m.mlp->input_dim()) + " inputs, data encodes " +
                                     std::to_string(mlp_view.inputs.cols()));
            }
            for (std::size_t r = 0; r < mlp_view.inputs.rows(); ++r) {
                predicted.push_back(classify_mlp(*m.mlp, mlp_view.inputs.row(r)).label);
            }
        }
        matrices.push_back({names.empty() ? m.default_name() : names[i], confusion(truth, predicted)});
    }

    const auto rows = compare(matrices);
    json report = to_json(rows);
    report["evaluated_records"] = truth.size();
    write_json(out / "comparison.json", report);
    const auto table = to_text(rows);
    write_text(out / "comparison.txt", table);
    write_text(out / "accuracy.csv", to_plot_csv(rows));
    log << table;

    const json outputs{{"comparison", "comparison.json"},
                       {"table", "comparison.txt"},
                       {"plot_data", "accuracy.csv"},
                       {"evaluated_records", truth.size()}};
    write_manifest(out, "eval", p, outputs);
    return outputs;
}

// ---- relations -------------------------------------------------------------

inline json run_relations(const json& p, std::ostream& log) {
    const auto model = load_model(p.at("model").get<std::string>());
    if (!model.relnet) throw ModelKindMismatch("relations need a relational network model, not an MLP");
    auto target = p.at("target").get<std::string>();
    if (target.empty()) target = resolve_schema(p).target_name;
    const auto report = relation_report(*model.relnet, model.relnet->index_of(target));
    const auto out = require_out(p);
    write_json(out / "relations.json", to_json(report));
    const auto text = to_text(report);
    write_text(out / "relations.txt", text);
    log << text;
    const json outputs{{"relations", "relations.json"}, {"table", "relations.txt"}};
    write_manifest(out, "relations", p, outputs);
    return outputs;
}

// ---- reproduce -------------------------------------------------------------

/// The whole study: synthesize, split, balance-train the MLP and the three
/// relational networks, evaluate on the untouched test split, and rank the
/// relations into the target for every relational network.
inline json run_reproduce(const json& p, std::ostream& log) {
    const auto out = require_out(p);
    const auto schema_path = p.at("schema").get<std::string>();
    const auto schema = resolve_schema(p);

    json synth = synth_defaults();
    for (const char* key : {"n", "positive_rate", "seed", "planted", "noise", "test_size", "schema"}) {
        synth[key] = p.at(key);
    }
    synth["out"] = (out / "data").string();
    run_synth(synth, log);

    struct Job {
        std::string name;
        std::string model;
        std::string activation;
    };
    const std::vector<Job> jobs{{"mlp", "mlp", "linear"},
                                {"relnet-linear", "relnet", "linear"},
                                {"relnet-logistic", "relnet", "logistic"},
                                {"relnet-tanh", "relnet", "tanh"}};
    json eval = eval_defaults();
    eval["schema"] = schema_path;
    eval["data"] = (out / "data" / "test.csv").string();
    eval["out"] = (out / "eval").string();
    for (const auto& job : jobs) {
        json train = train_defaults();
        for (const char* key : {"seed", "iterations", "step", "temperature", "hidden", "cycles", "learning_rate",
                                "momentum", "schema"}) {
            train[key] = p.at(key);
        }
        train["model"] = job.model;
        train["activation"] = job.activation;
        train["data"] = (out / "data" / "train.csv").string();
        train["out"] = (out / "models" / job.name).string();
        run_train(train, log);
        eval["models"].push_back((out / "models" / job.name / "model.json").string());
        eval["names"].push_back(job.name);
    }
    run_eval(eval, log);

    // Features planted directly into the target, strongest first.
    std::vector<std::pair<double, std::string>> planted_into_target;
    for (const auto& d : planted_from(p)) {
        if (d.to == schema.target_name) planted_into_target.emplace_back(d.coefficient, d.from);
    }
    std::stable_sort(planted_into_target.begin(), planted_into_target.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    json summary;
    const auto comparison = read_json(out / "eval" / "comparison.json");
    summary["accuracy"] = json::object();
    bool all_above_half = true;
    for (const auto& m : comparison.at("models")) {
        const double acc = m.at("metrics").at("accuracy").get<double>();
        summary["accuracy"][m.at("name").get<std::string>()] = acc;
        all_above_half = all_above_half && acc > 50.0;
    }
    summary["evaluated_records"] = comparison.at("evaluated_records");
    summary["planted_into_target"] = json::array();
    for (const auto& [c, f] : planted_into_target) summary["planted_into_target"].push_back(f);
    summary["top_relation"] = json::object();
    summary["planted_ranked_first"] = json::object();
    for (const auto& job : jobs) {
        if (job.model != "relnet") continue;
        json rel = relations_defaults();
        rel["schema"] = schema_path;
        rel["model"] = (out / "models" / job.name / "model.json").string();
        rel["out"] = (out / "relations" / job.name).string();
        run_relations(rel, log);
        const auto report = read_json(out / "relations" / job.name / "relations.json");
        const auto top = report.at("entries").at(0).at("feature").get<std::string>();
        summary["top_relation"][job.name] = top;
        summary["planted_ranked_first"][job.name] =
            !planted_into_target.empty() && top == planted_into_target.front().second;
    }
    summary["all_models_above_50"] = all_above_half;
    write_json(out / "summary.json", summary);
    write_manifest(out, "reproduce", p,
                   json{{"data", "data"}, {"models", "models"}, {"eval", "eval"}, {"relations", "relations"},
                        {"summary", "summary.json"}});
    return summary;
}

inline json run_command(const std::string& command, const json& params, std::ostream& log) {
    if (command == "synth") return run_synth(params, log);
    if (command == "train") return run_train(params, log);
    if (command == "eval") return run_eval(params, log);
    if (command == "relations") return run_relations(params, log);
    if (command == "reproduce") return run_reproduce(params, log);
    throw std::invalid_argument("unknown command '" + command + "'");
}

/// Runs a command and maps failures onto the tool's exit codes.
inline int execute(const std::string& command, const json& params, std::ostream& log, std::ostream& err) {
    try {
        run_command(command, params, log);
        return kOk;
    } catch (const BalanceError& e) {
        err << "error: " << e.what() << "\n";
        return kBalance;
    } catch (const SchemaMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kSchemaMismatch;
    } catch (const ModelKindMismatch& e) {
        err << "error: " << e.what() << "\n";
        return kModelKind;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: bad parameter: " << e.what() << "\n";
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
}

}  // namespace relnet::cli
