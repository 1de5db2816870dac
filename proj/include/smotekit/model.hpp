#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "smotekit/data.hpp"

namespace smotekit {

enum class ClassifierKind : std::uint8_t { naive_bayes, external };

std::string_view to_string(ClassifierKind k);
ClassifierKind parse_classifier_kind(std::string_view s);

struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::naive_bayes;
    /// Scale applied to the minority prior before renormalizing.
    double prior_multiplier = 1.0;
    /// Rows scoring at or above this are predicted minority.
    double threshold = 0.5;
    /// Shell command for ClassifierKind::external, see ExternalClassifier.
    std::string external_command;
};

/// Naive Bayes with Gaussian likelihoods for continuous features and
/// Laplace-smoothed (pseudo-count 1) frequencies for nominal ones.
///
/// Variances are maximum-likelihood estimates floored at 1e-9 * range^2,
/// where range is the feature's spread over the training rows (1e-9 when the
/// feature is constant).
class NaiveBayesModel {
public:
    static NaiveBayesModel train(const Dataset& ds, const ClassifierSpec& spec = {});

    /// Posterior probability of the minority class.
    double score(FeatureView row) const;
    ClassLabel predict(FeatureView row, double threshold) const;

    /// Renormalized priors indexed by ClassLabel.
    std::array<double, 2> priors() const { return priors_; }
    double mean(std::size_t feature, ClassLabel c) const;
    double variance(std::size_t feature, ClassLabel c) const;
    /// Smoothed P(value | class) for a nominal feature.
    double likelihood(std::size_t feature, ClassLabel c, std::size_t code) const;

private:
    struct Gaussian {
        double mean = 0;
        double variance = 1;
    };

    FeatureSchema schema_{{{"x", FeatureKind::continuous}}, "class"};
    std::array<double, 2> priors_{};
    double prior_log_odds_ = 0;  // log(minority prior / majority prior)
    std::array<std::size_t, 2> class_counts_{};
    std::array<std::vector<Gaussian>, 2> gaussians_;
    std::array<std::vector<std::vector<double>>, 2> category_counts_;
};

using TrainedModel = NaiveBayesModel;

inline ClassLabel label_for_score(double score, double threshold) {
    return score >= threshold ? ClassLabel::minority : ClassLabel::majority;
}

/// Delegates training and scoring to an external program.
///
/// The command is run through the shell as
///   <command> <train.csv> <test.csv> <scores.txt> <minority-token>
/// train.csv carries the class column; test.csv carries the feature columns
/// only, in the same order. The program must exit 0 and write one minority
/// score in [0,1] per test row, one per line, to scores.txt. Any other exit
/// status is reported as a failure with that status.
class ExternalClassifier {
public:
    explicit ExternalClassifier(std::string command);

    std::vector<double> fit_score(const Dataset& train, const Dataset& test) const;

    const std::string& command() const { return command_; }

private:
    std::string command_;
};

/// Scores every row of `test` with the configured classifier trained on `train`.
std::vector<double> train_and_score(const Dataset& train, const Dataset& test, const ClassifierSpec& spec);

}  // namespace smotekit
