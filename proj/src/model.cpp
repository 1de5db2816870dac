#include "smotekit/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>
#include <sys/wait.h>

#include "smotekit/diagnostics.hpp"
#include "smotekit/error.hpp"

namespace smotekit {

std::string_view to_string(ClassifierKind k) { return k == ClassifierKind::external ? "external" : "naive_bayes"; }

ClassifierKind parse_classifier_kind(std::string_view s) {
    if (s == "naive_bayes" || s == "naive-bayes" || s == "nb") return ClassifierKind::naive_bayes;
    if (s == "external") return ClassifierKind::external;
    throw ConfigError("unknown classifier: " + std::string(s));
}

NaiveBayesModel NaiveBayesModel::train(const Dataset& ds, const ClassifierSpec& spec) {
    if (!(spec.prior_multiplier > 0) || !std::isfinite(spec.prior_multiplier)) {
        throw ConfigError("prior multiplier must be a positive real");
    }
    if (spec.prior_multiplier < 1.0 || spec.prior_multiplier > 50.0) {
        warn("prior multiplier " + format_real(spec.prior_multiplier) + " is outside [1, 50]");
    }
    if (ds.minority_count() == 0 || ds.majority_count() == 0) {
        throw DataError("training set must contain both classes");
    }
    const auto& schema = ds.schema();
    NaiveBayesModel m;
    m.schema_ = schema;
    m.class_counts_ = {ds.majority_count(), ds.minority_count()};

    const double n_min = static_cast<double>(ds.minority_count()) * spec.prior_multiplier;
    const double n_maj = static_cast<double>(ds.majority_count());
    m.priors_ = {n_maj / (n_min + n_maj), n_min / (n_min + n_maj)};
    m.prior_log_odds_ = std::log(n_min) - std::log(n_maj);

    for (std::size_t c = 0; c < 2; ++c) {
        m.gaussians_[c].assign(schema.size(), Gaussian{});
        m.category_counts_[c].assign(schema.size(), {});
    }
    for (auto f : schema.nominal_indices()) {
        for (std::size_t c = 0; c < 2; ++c) {
            m.category_counts_[c][f].assign(ds.categories().category_count(f), 0.0);
        }
    }

    for (auto f : schema.continuous_indices()) {
        double lo = ds.row(0)[f], hi = lo;
        std::array<double, 2> sum{}, count{};
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const double v = ds.row(i)[f];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            const auto c = static_cast<std::size_t>(ds.label(i));
            sum[c] += v;
            count[c] += 1;
        }
        std::array<double, 2> ss{};
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const auto c = static_cast<std::size_t>(ds.label(i));
            const double d = ds.row(i)[f] - sum[c] / count[c];
            ss[c] += d * d;
        }
        const double range = hi - lo;
        const double floor = range > 0 ? 1e-9 * range * range : 1e-9;
        for (std::size_t c = 0; c < 2; ++c) {
            m.gaussians_[c][f] = Gaussian{sum[c] / count[c], std::max(ss[c] / count[c], floor)};
        }
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto c = static_cast<std::size_t>(ds.label(i));
        for (auto f : schema.nominal_indices()) {
            m.category_counts_[c][f][category_code(ds.row(i)[f])] += 1.0;
        }
    }
    return m;
}

double NaiveBayesModel::likelihood(std::size_t feature, ClassLabel c, std::size_t code) const {
    const auto ci = static_cast<std::size_t>(c);
    const auto& counts = category_counts_[ci].at(feature);
    const double denom = static_cast<double>(class_counts_[ci]) + static_cast<double>(counts.size());
    const double n = code < counts.size() ? counts[code] : 0.0;
    return (n + 1.0) / denom;
}

double NaiveBayesModel::mean(std::size_t feature, ClassLabel c) const {
    return gaussians_[static_cast<std::size_t>(c)].at(feature).mean;
}

double NaiveBayesModel::variance(std::size_t feature, ClassLabel c) const {
    return gaussians_[static_cast<std::size_t>(c)].at(feature).variance;
}

double NaiveBayesModel::score(FeatureView row) const {
    if (row.size() != schema_.size()) {
        throw DataError("row length does not match the trained schema");
    }
    // log P(min|x) - log P(maj|x)
    double log_odds = prior_log_odds_;
    for (auto f : schema_.continuous_indices()) {
        for (std::size_t c = 0; c < 2; ++c) {
            const auto& g = gaussians_[c][f];
            const double d = row[f] - g.mean;
            const double ll = -0.5 * std::log(2.0 * std::numbers::pi * g.variance) - d * d / (2.0 * g.variance);
            log_odds += c == 1 ? ll : -ll;
        }
    }
    for (auto f : schema_.nominal_indices()) {
        const auto code = category_code(row[f]);
        log_odds += std::log(likelihood(f, ClassLabel::minority, code)) -
                    std::log(likelihood(f, ClassLabel::majority, code));
    }
    return 1.0 / (1.0 + std::exp(-log_odds));
}

ClassLabel NaiveBayesModel::predict(FeatureView row, double threshold) const {
    return label_for_score(score(row), threshold);
}

// ---------------------------------------------------------------------------

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

std::filesystem::path make_workdir() {
    static std::atomic<unsigned long> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
        auto dir = base / ("smotekit-ext-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::error_code ec;
        if (std::filesystem::create_directory(dir, ec)) return dir;
        if (ec) throw IoError("cannot create working directory: " + ec.message());
    }
}

struct DirGuard {
    std::filesystem::path dir;
    ~DirGuard() {
        std::error_code ec;
        std::filesystem::remove_all(dir, ec);
    }
};

}  // namespace

ExternalClassifier::ExternalClassifier(std::string command) : command_(std::move(command)) {
    if (command_.empty()) {
        throw ConfigError("external classifier command is empty");
    }
}

std::vector<double> ExternalClassifier::fit_score(const Dataset& train, const Dataset& test) const {
    DirGuard guard{make_workdir()};
    const auto train_path = guard.dir / "train.csv";
    const auto test_path = guard.dir / "test.csv";
    const auto scores_path = guard.dir / "scores.txt";
    save_csv(train, train_path);
    {
        std::ofstream out(test_path, std::ios::binary);
        const auto& schema = test.schema();
        for (std::size_t f = 0; f < schema.size(); ++f) out << (f ? "," : "") << schema.feature(f).name;
        out << '\n';
        for (const auto& r : test.rows()) {
            for (std::size_t f = 0; f < schema.size(); ++f) {
                out << (f ? "," : "");
                if (schema.kind(f) == FeatureKind::continuous) {
                    out << format_real(r[f]);
                } else {
                    out << test.categories().token(f, category_code(r[f]));
                }
            }
            out << '\n';
        }
        if (!out) throw IoError("cannot write " + test_path.string());
    }
    const std::string cmd = command_ + " " + shell_quote(train_path.string()) + " " +
                            shell_quote(test_path.string()) + " " + shell_quote(scores_path.string()) + " " +
                            shell_quote(train.class_tokens().minority);
    const int status = std::system(cmd.c_str());
    const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    if (code != 0) {
        throw DataError("external classifier failed with exit status " + std::to_string(code));
    }
    std::ifstream in(scores_path);
    if (!in) {
        throw DataError("external classifier wrote no score file");
    }
    std::vector<double> scores;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        double s = 0;
        if (!(ls >> s) || !(s >= 0.0 && s <= 1.0)) {
            throw DataError("external classifier score out of range or malformed: '" + line + "'");
        }
        scores.push_back(s);
    }
    if (scores.size() != test.size()) {
        throw DataError("external classifier returned " + std::to_string(scores.size()) + " scores for " +
                        std::to_string(test.size()) + " rows");
    }
    return scores;
}

std::vector<double> train_and_score(const Dataset& train, const Dataset& test, const ClassifierSpec& spec) {
    if (spec.kind == ClassifierKind::external) {
        return ExternalClassifier(spec.external_command).fit_score(train, test);
    }
    const auto model = NaiveBayesModel::train(train, spec);
    std::vector<double> scores;
    scores.reserve(test.size());
    for (const auto& r : test.rows()) scores.push_back(model.score(r));
    return scores;
}

}  // namespace smotekit
