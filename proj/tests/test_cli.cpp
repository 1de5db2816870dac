#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "smotekit/data.hpp"
#include "test_support.hpp"

using namespace smotekit;

namespace {

// Per process, since ctest runs each case in its own process.
const std::filesystem::path kDir = support::temp_dir("cli-" + std::to_string(::getpid()));
const struct Cleanup {
    ~Cleanup() {
        std::error_code ec;
        std::filesystem::remove_all(kDir, ec);
    }
} cleanup;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Runs the CLI with `args`; returns the exit status, stdout+stderr in `output`.
int run(const std::string& args, std::string* output = nullptr) {
    const auto log = kDir / "last.log";
    const std::string cmd = std::string("'") + SMOTEKIT_CLI + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    if (output) *output = slurp(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Files {
    std::string csv;
    std::string schema;
};

const Files& blobs() {
    static const Files f = [] {
        auto ds = support::gaussian_blobs(180, 30, 2, 1.5, 12);
        Files out{(kDir / "blobs.csv").string(), (kDir / "blobs.json").string()};
        save_csv(ds, out.csv);
        std::ofstream(out.schema) << ds.schema().to_json_text();
        return out;
    }();
    return f;
}

std::string data_args() { return "'" + blobs().csv + "' --schema '" + blobs().schema + "' --minority pos"; }

std::size_t line_count(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string l; std::getline(in, l);) ++n;
    return n;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
    std::string out;
    EXPECT_EQ(run("--help", &out), 0);
    EXPECT_NE(out.find("experiment"), std::string::npos);
    EXPECT_EQ(run("", &out), 2);
    EXPECT_EQ(run("smote --bogus", &out), 2);
    EXPECT_EQ(run("smote " + data_args(), &out), 2);  // --out missing
    EXPECT_EQ(run("smote " + data_args() + " --out x --gap-mode sideways", &out), 2);
}

TEST(Cli, SmoteWritesRowsAndProvenance) {
    const auto out = kDir / "smote";
    ASSERT_EQ(run("smote " + data_args() + " --over 200 --gap-mode shared --seed 4 --out '" + out.string() + "'"),
              0);
    EXPECT_EQ(line_count(out / "augmented.csv"), 1u + 180u + 30u + 60u);
    EXPECT_EQ(line_count(out / "provenance.jsonl"), 60u);
    std::ifstream prov(out / "provenance.jsonl");
    std::string first;
    std::getline(prov, first);
    auto j = nlohmann::json::parse(first);
    EXPECT_EQ(j["variant"], "smote");
    EXPECT_EQ(j["gap"].size(), 1u);
}

TEST(Cli, UndersampleAndReplicate) {
    const auto out = kDir / "under";
    ASSERT_EQ(run("undersample " + data_args() + " --under 200 --out '" + out.string() + "'"), 0);
    EXPECT_EQ(line_count(out / "augmented.csv"), 1u + 30u + 15u);
    EXPECT_EQ(line_count(out / "provenance.jsonl"), 0u);
    const auto rep = kDir / "rep";
    ASSERT_EQ(run("replicate " + data_args() + " --over 100 --out '" + rep.string() + "'"), 0);
    EXPECT_EQ(line_count(rep / "provenance.jsonl"), 30u);
    EXPECT_EQ(run("undersample " + data_args() + " --out '" + out.string() + "'"), 2);
}

TEST(Cli, DataErrorsExitThree) {
    const auto bad = kDir / "bad.csv";
    std::ofstream(bad) << "x0,x1,class\n1,abc,pos\n2,3,neg\n";
    std::string out;
    EXPECT_EQ(run("smote '" + bad.string() + "' --schema '" + blobs().schema + "' --minority pos --out '" +
                      (kDir / "bad").string() + "'",
                  &out),
              3);
    EXPECT_NE(out.find("non-numeric value"), std::string::npos);
    EXPECT_EQ(run("smote /nonexistent.csv --schema '" + blobs().schema + "' --minority pos --out x"), 3);
    EXPECT_EQ(run("smote-n " + data_args() + " --out '" + (kDir / "n").string() + "'"), 2);
}

TEST(Cli, Evaluate) {
    const auto pts = kDir / "points.csv";
    std::ofstream(pts) << "family,fp_rate,tp_rate\na,0,0\na,10,80\nb,50,50\n";
    std::string out;
    ASSERT_EQ(run("evaluate '" + pts.string() + "' --out '" + (kDir / "eval").string() + "'", &out), 0);
    EXPECT_NE(out.find("0.85"), std::string::npos);
    EXPECT_NE(out.find("8500"), std::string::npos);
    auto summary = nlohmann::json::parse(slurp(kDir / "eval" / "summary.json"));
    EXPECT_EQ(summary["families_without_hull_vertices"], nlohmann::json::array({"b"}));
}

TEST(Cli, ExperimentAndManifestRerun) {
    const auto a = kDir / "exp-a";
    const auto b = kDir / "exp-b";
    std::string out;
    ASSERT_EQ(run("experiment " + data_args() + " --over 200 --under 50,100,200 --folds 3 --seed 9 --out '" +
                      a.string() + "'",
                  &out),
              0)
        << out;
    EXPECT_NE(out.find("smote_under@200"), std::string::npos);
    EXPECT_NE(out.find("hull"), std::string::npos);
    ASSERT_EQ(run("experiment --from-manifest '" + (a / "manifest.json").string() + "' --threads 2 --out '" +
                      b.string() + "'",
                  &out),
              0)
        << out;
    for (auto name : {"roc_points.csv", "hull.csv", "cells.csv", "summary.json"})
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
}

TEST(Cli, ExperimentConfigErrors) {
    EXPECT_EQ(run("experiment " + data_args() + " --families nothing --out '" + (kDir / "e1").string() + "'"), 2);
    EXPECT_EQ(run("experiment --out '" + (kDir / "e2").string() + "'"), 2);
    EXPECT_EQ(run("experiment " + data_args() + " --folds 3 --classifier external --out '" +
                  (kDir / "e3").string() + "'"),
              2);
    EXPECT_FALSE(std::filesystem::exists(kDir / "e1"));
}

TEST(Cli, ExternalClassifier) {
    const auto script = kDir / "clf.sh";
    std::ofstream(script) << "#!/bin/sh\nawk -F, 'NR>1{v=$1/4; if(v<0)v=0; if(v>1)v=1; print v}' \"$2\" > \"$3\"\n";
    std::string out;
    EXPECT_EQ(run("experiment " + data_args() +
                      " --families plain_under --under 100 --folds 3 --classifier external --external-cmd 'sh " +
                      script.string() + "' --out '" + (kDir / "ext").string() + "'",
                  &out),
              0)
        << out;
    const auto fail = kDir / "fail.sh";
    std::ofstream(fail) << "#!/bin/sh\nexit 4\n";
    EXPECT_EQ(run("experiment " + data_args() +
                      " --families plain_under --under 100 --folds 3 --classifier external --external-cmd 'sh " +
                      fail.string() + "' --out '" + (kDir / "ext2").string() + "'",
                  &out),
              3);
    EXPECT_NE(out.find("exit status 4"), std::string::npos);
}
