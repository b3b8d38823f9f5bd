#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(RELNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json read(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("relnet_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

    /// Small synthetic survey with a train/test split.
    void make_data(const std::string& name = "data", int n = 400) {
        ASSERT_EQ(run("synth --n " + std::to_string(n) + " --seed 3 --test-size 100 --planted Age:HIV:1.0 --out " +
                      path(name)),
                  0);
    }

    std::string quick_relnet(const std::string& extra = "") const {
        return "train --model relnet --iterations 300 --seed 1 --data " + path("data/train.csv") + " " + extra;
    }

    std::string quick_mlp(const std::string& extra = "") const {
        return "train --model mlp --cycles 5 --seed 1 --data " + path("data/train.csv") + " " + extra;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SynthRejectsBadRate) { EXPECT_EQ(run("synth --n 10 --positive-rate 1.5 --out " + path("s")), 2); }

TEST_F(Cli, SynthZeroRecordsWritesHeaderOnly) {
    ASSERT_EQ(run("synth --n 0 --out " + path("s")), 0);
    EXPECT_EQ(slurp(path("s/data.csv")), "Age,Education,Parity,Gravidity,AgeOfFather,HIV\n");
    EXPECT_TRUE(fs::exists(path("s/run.json")));
    EXPECT_TRUE(fs::exists(path("s/encoded.json")));
}

TEST_F(Cli, SynthWritesSplitAndManifest) {
    make_data();
    const auto manifest = read(path("data/run.json"));
    EXPECT_EQ(manifest["command"], "synth");
    EXPECT_EQ(manifest["params"]["seed"], 3);
    EXPECT_EQ(read(path("data/encoded.json"))["counts"]["mlp_inputs"], 14);
    const auto test = slurp(path("data/test.csv"));
    EXPECT_EQ(std::count(test.begin(), test.end(), '\n'), 101);
}

TEST_F(Cli, MissingArgumentsAndUnknownFlags) {
    EXPECT_EQ(run("train --out " + path("m")), 2);
    EXPECT_EQ(run("synth --bogus 1 --out " + path("s")), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, TrainMissingFile) {
    EXPECT_EQ(run("train --model relnet --data " + path("nope.csv") + " --out " + path("m")), 2);
}

TEST_F(Cli, TrainSingleClassIsBalanceError) {
    write(path("one.csv"), "Age,Education,Parity,Gravidity,AgeOfFather,HIV\n20,5,1,1,25,0\n30,6,2,2,35,0\n");
    EXPECT_EQ(run("train --model relnet --iterations 10 --data " + path("one.csv") + " --out " + path("m")), 3);
    EXPECT_EQ(run("train --model mlp --data " + path("one.csv") + " --out " + path("m2")), 3);
}

TEST_F(Cli, TrainMlpShape) {
    make_data();
    ASSERT_EQ(run(quick_mlp("--out " + path("mlp"))), 0);
    const auto model = read(path("mlp/model.json"));
    EXPECT_EQ(model["d"], 14);
    EXPECT_EQ(model["M"], 17);
    EXPECT_EQ(model["w1"].size(), 17u);
    EXPECT_EQ(model["w1"][0].size(), 15u);
    EXPECT_EQ(read(path("mlp/run.json"))["command"], "train");
}

TEST_F(Cli, TrainTargetOnlyRecordsMode) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--mode target-only --out " + path("r"))), 0);
    const auto report = read(path("r/report.json"));
    EXPECT_EQ(report["mode"], "target-only");
    EXPECT_EQ(report["target"], "HIV");
    EXPECT_EQ(report["error_trace"].size(), 301u);
    EXPECT_EQ(run(quick_relnet("--target Nope --out " + path("r2"))), 2);
}

TEST_F(Cli, TrainIsDeterministic) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--activation tanh --out " + path("a"))), 0);
    ASSERT_EQ(run(quick_relnet("--activation tanh --out " + path("b"))), 0);
    EXPECT_EQ(slurp(path("a/model.json")), slurp(path("b/model.json")));
    EXPECT_EQ(slurp(path("a/report.json")), slurp(path("b/report.json")));
    ASSERT_EQ(run(quick_mlp("--out " + path("c"))), 0);
    ASSERT_EQ(run(quick_mlp("--out " + path("d"))), 0);
    EXPECT_EQ(slurp(path("c/model.json")), slurp(path("d/model.json")));
}

TEST_F(Cli, EvalTwoModels) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--out " + path("r"))), 0);
    ASSERT_EQ(run(quick_mlp("--out " + path("m"))), 0);
    ASSERT_EQ(run("eval --model " + path("r/model.json") + " --model " + path("m/model.json") + " --data " +
                  path("data/test.csv") + " --out " + path("e")),
              0);
    const auto cmp = read(path("e/comparison.json"));
    ASSERT_EQ(cmp["models"].size(), 2u);
    EXPECT_EQ(cmp["evaluated_records"], 100);
    const auto table = slurp(path("e/comparison.txt"));
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 3);
    EXPECT_NE(table.find("relnet-linear"), std::string::npos);
    EXPECT_NE(table.find("mlp"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("e/accuracy.csv")));
}

TEST_F(Cli, EvalEmptyTestData) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--out " + path("r"))), 0);
    write(path("empty.csv"), "Age,Education,Parity,Gravidity,AgeOfFather,HIV\n");
    EXPECT_EQ(run("eval --model " + path("r/model.json") + " --data " + path("empty.csv") + " --out " + path("e")),
              2);
}

TEST_F(Cli, EvalSchemaMismatch) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--out " + path("r"))), 0);
    write(path("narrow.csv"), "Age,Education,HIV\n20,5,1\n");
    EXPECT_EQ(run("eval --model " + path("r/model.json") + " --data " + path("narrow.csv") + " --out " + path("e")),
              4);

    auto model = read(path("r/model.json"));
    model["node_names"][0] = "Height";
    write(path("renamed.json"), model.dump());
    EXPECT_EQ(run("eval --model " + path("renamed.json") + " --data " + path("data/test.csv") + " --out " +
                  path("e2")),
              4);
}

TEST_F(Cli, Relations) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--out " + path("r"))), 0);
    ASSERT_EQ(run(quick_mlp("--out " + path("m"))), 0);
    EXPECT_EQ(run("relations --model " + path("m/model.json") + " --out " + path("x")), 5);
    EXPECT_EQ(run("relations --model " + path("missing.json") + " --out " + path("x")), 2);

    ASSERT_EQ(run("relations --model " + path("r/model.json") + " --out " + path("rel")), 0);
    const auto rep = read(path("rel/relations.json"));
    EXPECT_EQ(rep["target"], "HIV");
    EXPECT_EQ(rep["entries"].size(), 5u);

    ASSERT_EQ(run("relations --model " + path("r/model.json") + " --target Age --out " + path("age")), 0);
    const auto age = read(path("age/relations.json"));
    EXPECT_EQ(age["target"], "Age");
    for (const auto& e : age["entries"]) EXPECT_NE(e["feature"], "Age");
}

TEST_F(Cli, ConfigAndManifestRerun) {
    make_data();
    ASSERT_EQ(run(quick_relnet("--activation logistic --out " + path("a"))), 0);

    // Re-running from the manifest with only --out overridden gives the same model.
    ASSERT_EQ(run("train --config " + path("a/run.json") + " --out " + path("b")), 0);
    EXPECT_EQ(slurp(path("a/model.json")), slurp(path("b/model.json")));

    // A bare config object; flags still override it.
    write(path("cfg.json"), json{{"model", "relnet"}, {"activation", "logistic"}, {"iterations", 300},
                                 {"seed", 99}, {"data", path("data/train.csv")}}
                                .dump());
    ASSERT_EQ(run("train --config " + path("cfg.json") + " --seed 1 --out " + path("c")), 0);
    EXPECT_EQ(slurp(path("a/model.json")), slurp(path("c/model.json")));

    write(path("bad.json"), R"({"itertions": 5})");
    EXPECT_EQ(run("train --config " + path("bad.json") + " --out " + path("d")), 2);
}
