#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fundtext/common.hpp"

namespace fundtext::embedtm {

enum class EmbeddingKind { chunk, word };

/// Vectors in file order; rows of `vectors` align with `ids`.
class EmbeddingSet {
public:
    EmbeddingSet() = default;
    EmbeddingSet(EmbeddingKind kind, std::string model, std::vector<std::string> ids, Eigen::MatrixXd vectors);

    [[nodiscard]] EmbeddingKind kind() const { return kind_; }
    [[nodiscard]] const std::string& model() const { return model_; }
    [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
    [[nodiscard]] std::size_t size() const { return ids_.size(); }
    [[nodiscard]] const std::vector<std::string>& ids() const { return ids_; }
    [[nodiscard]] const Eigen::MatrixXd& vectors() const { return vectors_; }
    [[nodiscard]] std::optional<std::size_t> find(const std::string& id) const;

private:
    EmbeddingKind kind_ = EmbeddingKind::chunk;
    std::string model_;
    std::vector<std::string> ids_;
    Eigen::MatrixXd vectors_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Header line {"dim":int,"kind":"chunk"|"word","model":str}, then
/// {"id":str,"v":[...]} per line. Rejects dimension mismatches, duplicate ids,
/// non-finite values and a kind other than `expected`.
EmbeddingSet load_embeddings(const std::filesystem::path& path, EmbeddingKind expected);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

enum class ReductionMethod { none, pca };

/// Fitted linear map x -> (x - mean) * components. `components` is dim x d.
struct Reduction {
    ReductionMethod method = ReductionMethod::none;
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd components;
    Eigen::VectorXd eigenvalues;  // sample covariance eigenvalues of kept axes

    [[nodiscard]] EmbeddingSet apply(const EmbeddingSet& set) const;
};

/// PCA keeps the top d_target principal axes, each signed so its
/// largest-magnitude loading is positive.
Reduction fit_reduction(const EmbeddingSet& set, std::size_t d_target, ReductionMethod method);
EmbeddingSet reduce_dimensions(const EmbeddingSet& set, std::size_t d_target, ReductionMethod method);

/// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace fundtext::embedtm
