// relnet: synthesize survey-style data, train relational networks and an MLP
// baseline, evaluate them and report learned feature relations.

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relnet/cli/commands.hpp"

namespace {

using relnet::cli::json;

/// Collects flag values that override defaults/config only when given.
class Overrides {
public:
    template <class T>
    CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        auto storage = std::make_shared<T>();
        auto* opt = app->add_option(flag, *storage, help);
        apply_.push_back([opt, key, storage](json& p) {
            if (opt->count() > 0) p[key] = *storage;
        });
        return opt;
    }

    CLI::Option* add_planted(CLI::App* app, const std::string& key) {
        auto storage = std::make_shared<std::vector<std::string>>();
        auto* opt = app->add_option("--planted", *storage,
                                    "planted dependency From:To:coefficient (repeatable)");
        apply_.push_back([opt, key, storage](json& p) {
            if (opt->count() == 0) return;
            p[key] = json::array();
            for (const auto& s : *storage) p[key].push_back(relnet::data::parse_planted(s));
        });
        return opt;
    }

    void apply(json& params) const {
        for (const auto& f : apply_) f(params);
    }

private:
    std::vector<std::function<void(json&)>> apply_;
};

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    Overrides overrides;
    std::string config;
};

void add_sampler_flags(Command& c) {
    c.overrides.add<std::size_t>(c.app, "--iterations", "iterations", "Metropolis-Hastings iterations");
    c.overrides.add<double>(c.app, "--step", "step", "proposal std-dev in weight units");
    c.overrides.add<double>(c.app, "--temperature", "temperature", "acceptance temperature (0 = greedy)");
}

void add_mlp_flags(Command& c) {
    c.overrides.add<std::size_t>(c.app, "--hidden", "hidden", "MLP hidden units");
    c.overrides.add<std::size_t>(c.app, "--cycles", "cycles", "MLP training cycles");
    c.overrides.add<double>(c.app, "--learning-rate", "learning_rate", "MLP learning rate");
    c.overrides.add<double>(c.app, "--momentum", "momentum", "MLP momentum");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relational network and MLP classifier toolkit"};
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    auto make = [&](const std::string& name, const std::string& help) -> Command& {
        auto c = std::make_unique<Command>();
        c->name = name;
        c->app = app.add_subcommand(name, help);
        c->app->add_option("--config", c->config, "JSON config or run.json manifest; flags override it");
        c->overrides.add<std::string>(c->app, "--out", "out", "output directory");
        c->overrides.add<std::string>(c->app, "--schema", "schema", "schema JSON (default: built-in survey schema)");
        commands.push_back(std::move(c));
        return *commands.back();
    };

    {
        auto& c = make("synth", "generate a synthetic survey dataset");
        c.overrides.add<std::size_t>(c.app, "--n", "n", "number of records");
        c.overrides.add<double>(c.app, "--positive-rate", "positive_rate", "fraction of positive labels");
        c.overrides.add<std::uint64_t>(c.app, "--seed", "seed", "random seed");
        c.overrides.add<double>(c.app, "--noise", "noise", "std-dev of planted-dependency noise");
        c.overrides.add<std::size_t>(c.app, "--test-size", "test_size", "also write a train/test split");
        c.overrides.add_planted(c.app, "planted");
    }
    {
        auto& c = make("train", "train a relational network or an MLP on a dataset");
        c.overrides.add<std::string>(c.app, "--data", "data", "training CSV");
        c.overrides.add<std::string>(c.app, "--model", "model", "relnet or mlp");
        c.overrides.add<std::string>(c.app, "--activation", "activation", "linear, logistic or tanh (relnet)");
        c.overrides.add<std::string>(c.app, "--mode", "mode", "all-features or target-only (relnet)");
        c.overrides.add<std::string>(c.app, "--target", "target", "target feature name");
        c.overrides.add<std::uint64_t>(c.app, "--seed", "seed", "random seed");
        c.overrides.add<std::size_t>(c.app, "--trace-stride", "trace_stride", "keep every k-th trace entry");
        add_sampler_flags(c);
        add_mlp_flags(c);
    }
    {
        auto& c = make("eval", "evaluate models on a test CSV and compare them");
        c.overrides.add<std::vector<std::string>>(c.app, "--model", "models", "model JSON (repeatable)");
        c.overrides.add<std::vector<std::string>>(c.app, "--name", "names", "display name per model");
        c.overrides.add<std::string>(c.app, "--data", "data", "test CSV");
    }
    {
        auto& c = make("relations", "rank the learned relations into a node");
        c.overrides.add<std::string>(c.app, "--model", "model", "relational network model JSON");
        c.overrides.add<std::string>(c.app, "--target", "target", "node to report on");
    }
    {
        auto& c = make("reproduce", "run the full synth/train/eval/relations study");
        c.overrides.add<std::uint64_t>(c.app, "--seed", "seed", "random seed");
        c.overrides.add<std::size_t>(c.app, "--n", "n", "number of records");
        c.overrides.add<std::size_t>(c.app, "--test-size", "test_size", "test records");
        c.overrides.add<double>(c.app, "--positive-rate", "positive_rate", "fraction of positive labels");
        c.overrides.add<double>(c.app, "--noise", "noise", "std-dev of planted-dependency noise");
        c.overrides.add_planted(c.app, "planted");
        add_sampler_flags(c);
        add_mlp_flags(c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? relnet::cli::kOk : relnet::cli::kUsage;
    }

    for (const auto& c : commands) {
        if (!c->app->parsed()) continue;
        json params;
        try {
            params = relnet::cli::defaults_for(c->name);
            if (!c->config.empty()) params = relnet::cli::merge_config(params, c->config);
            c->overrides.apply(params);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return relnet::cli::kUsage;
        }
        return relnet::cli::execute(c->name, params, std::cout, std::cerr);
    }
    return relnet::cli::kUsage;
}
