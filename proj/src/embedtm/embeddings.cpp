#include "fundtext/embedtm/embeddings.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace fundtext::embedtm {

EmbeddingSet::EmbeddingSet(EmbeddingKind kind, std::string model, std::vector<std::string> ids,
                           Eigen::MatrixXd vectors)
    : kind_(kind), model_(std::move(model)), ids_(std::move(ids)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows())
        throw ValidationError("embedding set: id count does not match vector count");
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (!index_.emplace(ids_[i], i).second) throw ValidationError("duplicate embedding id " + ids_[i]);
}

std::optional<std::size_t> EmbeddingSet::find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

EmbeddingSet load_embeddings(const std::filesystem::path& path, EmbeddingKind expected) {
    using nlohmann::json;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open embedding file " + path.string());

    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
        }
        return false;
    };
    auto fail = [&](const std::string& msg) {
        return ValidationError(path.string() + " line " + std::to_string(line_no) + ": " + msg);
    };

    if (!next_line()) throw ValidationError(path.string() + ": missing embedding header");
    std::size_t dim = 0;
    EmbeddingKind kind{};
    std::string model;
    try {
        auto h = json::parse(line);
        dim = h.at("dim").get<std::size_t>();
        auto k = h.at("kind").get<std::string>();
        if (k == "chunk") kind = EmbeddingKind::chunk;
        else if (k == "word") kind = EmbeddingKind::word;
        else throw fail("unknown embedding kind '" + k + "'");
        if (auto it = h.find("model"); it != h.end() && it->is_string()) model = it->get<std::string>();
    } catch (const json::exception& e) {
        throw fail(std::string("bad header: ") + e.what());
    }
    if (dim == 0) throw fail("dim must be positive");
    if (kind != expected)
        throw fail(std::string("expected ") + (expected == EmbeddingKind::chunk ? "chunk" : "word") + " embeddings");

    std::vector<std::string> ids;
    std::vector<double> values;
    std::unordered_map<std::string, std::size_t> seen;
    while (next_line()) {
        std::string id;
        std::vector<double> v;
        try {
            auto rec = json::parse(line);
            id = rec.at("id").get<std::string>();
            const auto& arr = rec.at("v");
            if (!arr.is_array()) throw fail("record " + id + ": 'v' must be an array");
            for (const auto& x : arr) {
                if (!x.is_number()) throw fail("record " + id + ": non-numeric value");
                v.push_back(x.get<double>());
            }
        } catch (const json::exception& e) {
            throw fail(std::string("malformed record: ") + e.what());
        }
        if (v.size() != dim)
            throw fail("record " + id + " has " + std::to_string(v.size()) + " values, expected " + std::to_string(dim));
        for (double x : v)
            if (!std::isfinite(x)) throw fail("record " + id + " has a non-finite value");
        if (!seen.emplace(id, ids.size()).second) throw fail("duplicate id " + id);
        ids.push_back(std::move(id));
        values.insert(values.end(), v.begin(), v.end());
    }

    Eigen::MatrixXd m(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < ids.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * dim + c];
    return EmbeddingSet(kind, std::move(model), std::move(ids), std::move(m));
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    nlohmann::ordered_json header;
    header["dim"] = set.dim();
    header["kind"] = set.kind() == EmbeddingKind::chunk ? "chunk" : "word";
    header["model"] = set.model();
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        nlohmann::ordered_json rec;
        rec["id"] = set.ids()[i];
        std::vector<double> v(set.dim());
        for (std::size_t c = 0; c < set.dim(); ++c)
            v[c] = set.vectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        rec["v"] = v;
        out << rec.dump() << '\n';
    }
}

EmbeddingSet Reduction::apply(const EmbeddingSet& set) const {
    if (method == ReductionMethod::none) return set;
    if (static_cast<Eigen::Index>(set.dim()) != mean.size())
        throw ValidationError("reduction: embedding dim " + std::to_string(set.dim()) + " does not match fitted dim " +
                              std::to_string(mean.size()));
    Eigen::MatrixXd projected = (set.vectors().rowwise() - mean) * components;
    return EmbeddingSet(set.kind(), set.model(), set.ids(), std::move(projected));
}

Reduction fit_reduction(const EmbeddingSet& set, std::size_t d_target, ReductionMethod method) {
    if (d_target < 1 || d_target > set.dim())
        throw ValidationError("reduce_dimensions: d_target " + std::to_string(d_target) + " must be in [1, " +
                              std::to_string(set.dim()) + "]");
    Reduction r;
    r.method = method;
    if (method == ReductionMethod::none) return r;
    if (set.size() == 0) throw ValidationError("reduce_dimensions: empty embedding set");

    const Eigen::MatrixXd& x = set.vectors();
    r.mean = x.colwise().mean();
    Eigen::MatrixXd centered = x.rowwise() - r.mean;
    const double denom = static_cast<double>(std::max<std::size_t>(set.size() - 1, 1));
    Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw Error("reduce_dimensions: eigendecomposition failed");

    const Eigen::Index dim = cov.rows();
    const auto d = static_cast<Eigen::Index>(d_target);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    r.components.resize(dim, d);
    r.eigenvalues.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        Eigen::VectorXd axis = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < dim; ++i)
            if (std::abs(axis(i)) > std::abs(axis(arg))) arg = i;
        if (axis(arg) < 0) axis = -axis;
        r.components.col(j) = axis;
        r.eigenvalues(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
    }
    return r;
}

EmbeddingSet reduce_dimensions(const EmbeddingSet& set, std::size_t d_target, ReductionMethod method) {
    return fit_reduction(set, d_target, method).apply(set);
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

}  // namespace fundtext::embedtm
