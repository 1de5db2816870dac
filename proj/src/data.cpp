#include "smotekit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "smotekit/error.hpp"
#include "smotekit/rng.hpp"

namespace smotekit {

// ---------------------------------------------------------------------------
// FeatureSchema

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> features, std::string class_column)
    : features_(std::move(features)), class_column_(std::move(class_column)) {
    if (features_.empty()) {
        throw ConfigError("schema must declare at least one feature");
    }
    if (class_column_.empty()) {
        throw ConfigError("schema must name a class column");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto& f = features_[i];
        if (f.name.empty()) {
            throw ConfigError("feature names must be non-empty");
        }
        if (f.name == class_column_ || !seen.insert(f.name).second) {
            throw ConfigError("duplicate column name in schema: " + f.name);
        }
        (f.kind == FeatureKind::continuous ? continuous_ : nominal_).push_back(i);
    }
}

FeatureSchema FeatureSchema::from_json_text(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("schema must be a JSON object of column -> kind");
    }
    std::vector<FeatureSpec> features;
    std::string class_column;
    for (const auto& [name, kind] : j.items()) {
        if (!kind.is_string()) {
            throw ConfigError("schema kind for column '" + name + "' must be a string");
        }
        const auto k = kind.get<std::string>();
        if (k == "continuous") {
            features.push_back({name, FeatureKind::continuous});
        } else if (k == "nominal") {
            features.push_back({name, FeatureKind::nominal});
        } else if (k == "class") {
            if (!class_column.empty()) {
                throw ConfigError("schema declares more than one class column");
            }
            class_column = name;
        } else {
            throw ConfigError("unknown schema kind '" + k + "' for column '" + name + "'");
        }
    }
    if (class_column.empty()) {
        throw ConfigError("schema declares no class column");
    }
    return FeatureSchema(std::move(features), std::move(class_column));
}

FeatureSchema FeatureSchema::load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open schema file: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::string FeatureSchema::to_json_text() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : features_) {
        j[f.name] = f.kind == FeatureKind::continuous ? "continuous" : "nominal";
    }
    j[class_column_] = "class";
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(FeatureSchema schema, std::vector<FeatureVector> rows, std::vector<ClassLabel> labels,
                 CategoryDictionary categories, ClassTokens class_tokens)
    : schema_(std::move(schema)),
      rows_(std::move(rows)),
      labels_(std::move(labels)),
      categories_(std::move(categories)),
      class_tokens_(std::move(class_tokens)) {
    if (rows_.size() != labels_.size()) {
        throw DataError("row count and label count differ");
    }
    if (categories_.tokens.size() != schema_.size()) {
        categories_.tokens.resize(schema_.size());
    }
    for (const auto& r : rows_) {
        if (r.size() != schema_.size()) {
            throw DataError("row has " + std::to_string(r.size()) + " entries, schema has " +
                            std::to_string(schema_.size()));
        }
        for (std::size_t f = 0; f < r.size(); ++f) {
            if (!std::isfinite(r[f])) {
                throw DataError("non-finite value in feature '" + schema_.feature(f).name + "'");
            }
            if (schema_.kind(f) == FeatureKind::nominal) {
                if (r[f] < 0 || r[f] != std::floor(r[f]) ||
                    category_code(r[f]) >= categories_.category_count(f)) {
                    throw DataError("invalid category code in feature '" + schema_.feature(f).name + "'");
                }
            }
        }
    }
    minority_count_ = static_cast<std::size_t>(
        std::count(labels_.begin(), labels_.end(), ClassLabel::minority));
}

std::vector<std::size_t> Dataset::indices_of(ClassLabel label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<FeatureVector> Dataset::rows_of(ClassLabel label) const {
    std::vector<FeatureVector> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == label) {
            out.push_back(rows_[i]);
        }
    }
    return out;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    rows.reserve(indices.size());
    labels.reserve(indices.size());
    for (auto i : indices) {
        rows.push_back(rows_.at(i));
        labels.push_back(labels_.at(i));
    }
    return Dataset(schema_, std::move(rows), std::move(labels), categories_, class_tokens_);
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw DataError("unterminated quoted field");
    }
    fields.push_back(std::move(cur));
    return fields;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool is_missing(std::string_view token) { return token.empty() || token == "?"; }

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

Dataset read_csv(std::istream& in, const FeatureSchema& schema, std::string_view minority_label) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("CSV is empty (missing header row)");
    }
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
        line.erase(0, 3);
    }
    const auto header = split_csv_record(line);
    std::unordered_map<std::string, std::size_t> column_of;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string name(trim(header[c]));
        if (!column_of.emplace(name, c).second) {
            throw DataError("duplicate column in CSV header: " + name);
        }
    }
    std::vector<std::size_t> feature_column(schema.size());
    for (std::size_t f = 0; f < schema.size(); ++f) {
        auto it = column_of.find(schema.feature(f).name);
        if (it == column_of.end()) {
            throw DataError("missing column: " + schema.feature(f).name);
        }
        feature_column[f] = it->second;
    }
    auto class_it = column_of.find(schema.class_column());
    if (class_it == column_of.end()) {
        throw DataError("missing column: " + schema.class_column());
    }
    const std::size_t class_column = class_it->second;
    if (header.size() != schema.size() + 1) {
        throw DataError("CSV header has columns not declared in the schema");
    }

    CategoryDictionary categories;
    categories.tokens.resize(schema.size());
    std::vector<std::unordered_map<std::string, std::size_t>> interned(schema.size());

    std::vector<FeatureVector> rows;
    std::vector<ClassLabel> labels;
    std::string majority_token;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_record(line);
        const auto where = " (line " + std::to_string(line_no) + ")";
        if (fields.size() != header.size()) {
            throw DataError("expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()) + where);
        }
        FeatureVector row(schema.size());
        for (std::size_t f = 0; f < schema.size(); ++f) {
            const auto token = trim(fields[feature_column[f]]);
            const auto& name = schema.feature(f).name;
            if (is_missing(token)) {
                throw DataError("missing value in column '" + name + "'" + where);
            }
            if (schema.kind(f) == FeatureKind::continuous) {
                double v = 0;
                const char* first = token.data();
                const char* last = token.data() + token.size();
                if (*first == '+') ++first;
                auto [ptr, ec] = std::from_chars(first, last, v);
                if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
                    throw DataError("non-numeric value '" + std::string(token) + "' in continuous column '" +
                                    name + "'" + where);
                }
                row[f] = v;
            } else {
                auto [it, inserted] = interned[f].emplace(std::string(token), categories.tokens[f].size());
                if (inserted) {
                    categories.tokens[f].emplace_back(token);
                }
                row[f] = static_cast<double>(it->second);
            }
        }
        const auto cls = trim(fields[class_column]);
        if (is_missing(cls)) {
            throw DataError("missing class value" + where);
        }
        if (cls == minority_label) {
            labels.push_back(ClassLabel::minority);
        } else {
            if (majority_token.empty()) {
                majority_token = std::string(cls);
            } else if (cls != majority_token) {
                throw DataError("unknown class value '" + std::string(cls) + "': only two classes are supported ('" +
                                std::string(minority_label) + "' and '" + majority_token + "')" + where);
            }
            labels.push_back(ClassLabel::majority);
        }
        rows.push_back(std::move(row));
    }

    Dataset ds(schema, std::move(rows), std::move(labels), std::move(categories),
               ClassTokens{std::string(minority_label), majority_token});
    if (ds.minority_count() == 0) {
        throw DataError("minority label '" + std::string(minority_label) + "' does not occur in the data");
    }
    if (ds.majority_count() == 0) {
        throw DataError("data holds no majority-class rows");
    }
    if (ds.minority_count() > ds.majority_count()) {
        throw DataError("minority count " + std::to_string(ds.minority_count()) + " exceeds majority count " +
                        std::to_string(ds.majority_count()) + "; is the minority label correct?");
    }
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema, std::string_view minority_label) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open data file: " + path.string());
    }
    return read_csv(in, schema, minority_label);
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(const Dataset& ds, std::ostream& out) {
    const auto& schema = ds.schema();
    for (const auto& f : schema.features()) {
        out << quote_if_needed(f.name) << ',';
    }
    out << quote_if_needed(schema.class_column()) << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& r = ds.row(i);
        for (std::size_t f = 0; f < schema.size(); ++f) {
            if (schema.kind(f) == FeatureKind::continuous) {
                out << format_real(r[f]);
            } else {
                out << quote_if_needed(ds.categories().token(f, category_code(r[f])));
            }
            out << ',';
        }
        const auto& cls = ds.label(i) == ClassLabel::minority ? ds.class_tokens().minority
                                                              : ds.class_tokens().majority;
        out << quote_if_needed(cls) << '\n';
    }
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write: " + path.string());
    }
    write_csv(ds, out);
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

// ---------------------------------------------------------------------------
// Folds

FoldAssignment::FoldAssignment(std::vector<std::size_t> fold_of_row, std::size_t n_folds)
    : fold_of_row_(std::move(fold_of_row)), n_folds_(n_folds) {
    if (n_folds_ == 0) {
        throw ConfigError("n_folds must be positive");
    }
    for (auto f : fold_of_row_) {
        if (f >= n_folds_) {
            throw ConfigError("fold index out of range");
        }
    }
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_row_.size(); ++i) {
        if (fold_of_row_[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_row_.size(); ++i) {
        if (fold_of_row_[i] != fold) out.push_back(i);
    }
    return out;
}

FoldAssignment stratified_folds(const Dataset& ds, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 2) {
        throw ConfigError("n_folds must be at least 2");
    }
    const auto minority = ds.indices_of(ClassLabel::minority);
    const auto majority = ds.indices_of(ClassLabel::majority);
    if (minority.size() < n_folds || majority.size() < n_folds) {
        throw DataError("class smaller than n_folds: minority " + std::to_string(minority.size()) + ", majority " +
                        std::to_string(majority.size()) + ", folds " + std::to_string(n_folds));
    }
    std::vector<std::size_t> fold_of(ds.size(), 0);
    auto deal = [&](const std::vector<std::size_t>& members, std::string_view label, std::size_t offset) {
        Rng rng = Rng::stream(seed, label);
        const auto order = random_permutation(members.size(), rng);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            fold_of[members[order[pos]]] = (offset + pos) % n_folds;
        }
    };
    deal(minority, "folds/minority", 0);
    deal(majority, "folds/majority", minority.size() % n_folds);
    return FoldAssignment(std::move(fold_of), n_folds);
}

}  // namespace smotekit
