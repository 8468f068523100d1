#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fundtext::evalx {

/// The seven annotation categories, alphabetical.
inline constexpr std::array<std::string_view, 7> kCategories{
    "Disclosure", "Fund Terms", "Investment Team", "Market Update", "Other", "Performance Commentary",
    "Strategy Overview"};

struct AnnotationRow {
    std::string model_id;
    int topic_id = 0;
    std::array<double, 7> percent{};  // indexed like kCategories
    std::size_t n_samples = 0;
    std::size_t n_members = 0;

    [[nodiscard]] double disclosure_percent() const { return percent[0]; }
};

/// Rows ordered by (model_id, topic_id).
struct AnnotationTable {
    std::vector<AnnotationRow> rows;

    [[nodiscard]] AnnotationTable for_model(std::string_view model_id) const;
    [[nodiscard]] std::vector<std::string> model_ids() const;
};

/// Long CSV: model_id,topic_id,category,percent,n_samples,n_members. Every
/// topic's percentages must sum to 100 ± 0.1; absent categories count as 0.
AnnotationTable load_annotations(const std::filesystem::path& path);
AnnotationTable parse_annotations(std::string_view csv_text);

struct PredictedClass {
    std::string category;
    double accuracy = 0.0;
};

/// Highest-percentage category; ties go to the alphabetically first.
PredictedClass topic_predicted_class(const AnnotationRow& row);

enum class Weighting { doc_weighted, equal_weighted };

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    Weighting weighting = Weighting::doc_weighted;
};

double f1_from_pr(double precision, double recall);

/// A topic is a positive prediction when Disclosure% < 50. Each text
/// inherits its topic's label; non-Disclosure texts are the true positives.
ClassMetrics disclosure_prf(const AnnotationTable& annotations, Weighting weighting);

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

}  // namespace fundtext::evalx
