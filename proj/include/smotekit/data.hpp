#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smotekit {

enum class FeatureKind : std::uint8_t { continuous, nominal };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::continuous;

    bool operator==(const FeatureSpec&) const = default;
};

/// Ordered feature list plus the name of the class column.
class FeatureSchema {
public:
    FeatureSchema(std::vector<FeatureSpec> features, std::string class_column);

    /// Parses the sidecar format: a JSON object mapping column name to
    /// "continuous", "nominal" or "class". Feature order follows the object.
    static FeatureSchema from_json_text(std::string_view text);
    static FeatureSchema load_json(const std::filesystem::path& path);
    std::string to_json_text() const;

    std::size_t size() const { return features_.size(); }
    const std::vector<FeatureSpec>& features() const { return features_; }
    const FeatureSpec& feature(std::size_t i) const { return features_.at(i); }
    FeatureKind kind(std::size_t i) const { return features_[i].kind; }
    const std::string& class_column() const { return class_column_; }

    bool all_continuous() const { return continuous_.size() == features_.size(); }
    bool all_nominal() const { return nominal_.size() == features_.size(); }
    const std::vector<std::size_t>& continuous_indices() const { return continuous_; }
    const std::vector<std::size_t>& nominal_indices() const { return nominal_; }

    bool operator==(const FeatureSchema& o) const {
        return features_ == o.features_ && class_column_ == o.class_column_;
    }

private:
    std::vector<FeatureSpec> features_;
    std::string class_column_;
    std::vector<std::size_t> continuous_;
    std::vector<std::size_t> nominal_;
};

/// One row. Continuous entries hold the value; nominal entries hold the
/// interned category code (0, 1, 2, ... in first-appearance order).
using FeatureVector = std::vector<double>;
using FeatureView = std::span<const double>;

enum class ClassLabel : std::uint8_t { majority = 0, minority = 1 };

/// Per-feature category tokens; empty for continuous features.
struct CategoryDictionary {
    std::vector<std::vector<std::string>> tokens;

    std::size_t category_count(std::size_t feature) const { return tokens.at(feature).size(); }
    const std::string& token(std::size_t feature, std::size_t code) const {
        return tokens.at(feature).at(code);
    }
    bool operator==(const CategoryDictionary&) const = default;
};

struct ClassTokens {
    std::string minority;
    std::string majority;
    bool operator==(const ClassTokens&) const = default;
};

inline std::size_t category_code(double v) { return static_cast<std::size_t>(v); }

/// Immutable binary-labelled table.
class Dataset {
public:
    Dataset(FeatureSchema schema, std::vector<FeatureVector> rows, std::vector<ClassLabel> labels,
            CategoryDictionary categories, ClassTokens class_tokens);

    const FeatureSchema& schema() const { return schema_; }
    const CategoryDictionary& categories() const { return categories_; }
    const ClassTokens& class_tokens() const { return class_tokens_; }

    std::size_t size() const { return rows_.size(); }
    const std::vector<FeatureVector>& rows() const { return rows_; }
    const FeatureVector& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<ClassLabel>& labels() const { return labels_; }
    ClassLabel label(std::size_t i) const { return labels_.at(i); }

    std::size_t minority_count() const { return minority_count_; }
    std::size_t majority_count() const { return rows_.size() - minority_count_; }
    std::vector<std::size_t> indices_of(ClassLabel label) const;
    std::vector<FeatureVector> rows_of(ClassLabel label) const;

    /// New dataset holding rows[indices] in the given order.
    Dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset&) const = default;

private:
    FeatureSchema schema_;
    std::vector<FeatureVector> rows_;
    std::vector<ClassLabel> labels_;
    CategoryDictionary categories_;
    ClassTokens class_tokens_;
    std::size_t minority_count_ = 0;
};

/// Reads a headed CSV. Columns are matched to the schema by name, so header
/// order is free, but the header must hold exactly the schema's features plus
/// the class column. Missing values (empty or "?") are rejected. Every class
/// token other than `minority_label` must be one single majority token, and
/// the minority may not outnumber the majority.
Dataset read_csv(std::istream& in, const FeatureSchema& schema, std::string_view minority_label);
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                 std::string_view minority_label);

/// Writes features in schema order followed by the class column. Reals use
/// the shortest representation that round-trips exactly.
void write_csv(const Dataset& ds, std::ostream& out);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

std::string format_real(double v);

/// Splits a CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_record(std::string_view line);

class FoldAssignment {
public:
    FoldAssignment(std::vector<std::size_t> fold_of_row, std::size_t n_folds);

    std::size_t n_folds() const { return n_folds_; }
    const std::vector<std::size_t>& fold_of_row() const { return fold_of_row_; }
    std::size_t fold_of(std::size_t row) const { return fold_of_row_.at(row); }

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;

    bool operator==(const FoldAssignment&) const = default;

private:
    std::vector<std::size_t> fold_of_row_;
    std::size_t n_folds_;
};

/// Stratified assignment: each class is shuffled with its own substream and
/// dealt round-robin. The majority deal starts where the minority deal ended,
/// so fold sizes stay within one of each other overall as well.
FoldAssignment stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed);

}  // namespace smotekit
