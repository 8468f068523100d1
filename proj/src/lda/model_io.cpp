#include "fundtext/lda/model_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace fundtext::lda {
namespace {

constexpr std::array<char, 16> kMagic{'F', 'U', 'N', 'D', 'T', 'E', 'X', 'T', '-', 'L', 'D', 'A', 0, 0, 0, 1};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void write_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T read_le(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) throw ValidationError("lda model file truncated");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

nlohmann::ordered_json config_json(const LdaConfig& c) {
    nlohmann::ordered_json j;
    j["K"] = c.num_topics;
    j["alpha"] = c.alpha_value();
    j["beta"] = c.beta_value();
    j["iterations"] = c.iterations;
    j["burn_in"] = c.burn_in_value();
    j["seed"] = c.seed;
    j["tau"] = c.tau;
    return j;
}

}  // namespace

void save_model(const LdaModel& model, const std::filesystem::path& path) {
    nlohmann::ordered_json header;
    header["format_version"] = 1;
    header["config"] = config_json(model.config);
    header["K"] = model.num_topics();
    header["V"] = model.vocab_size();
    header["D"] = model.theta.rows;
    header["terms"] = model.terms;
    header["chunk_ids"] = model.chunk_ids;
    header["log_likelihood"] = model.log_likelihood;
    const std::string text = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write lda model " + path.string());
    out.write(kMagic.data(), kMagic.size());
    write_le<std::uint64_t>(out, text.size());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (double v : model.phi.data) write_le<double>(out, v);
    for (double v : model.theta.data) write_le<double>(out, v);
    for (const auto& a : assign_chunks(model, model.config.tau)) write_le<std::int32_t>(out, a.topic);
    if (!out) throw Error("failed writing lda model " + path.string());
}

LdaModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open lda model " + path.string());
    std::array<char, 16> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw ValidationError(path.string() + " is not an lda model file (version 1)");

    const auto header_len = read_le<std::uint64_t>(in);
    std::string text(header_len, '\0');
    if (!in.read(text.data(), static_cast<std::streamsize>(header_len))) throw ValidationError("lda model file truncated");

    LdaModel model;
    try {
        auto h = nlohmann::json::parse(text);
        const auto& c = h.at("config");
        model.config.num_topics = c.at("K").get<int>();
        model.config.alpha = c.at("alpha").get<double>();
        model.config.beta = c.at("beta").get<double>();
        model.config.iterations = c.at("iterations").get<int>();
        model.config.burn_in = c.at("burn_in").get<int>();
        model.config.seed = c.at("seed").get<std::uint64_t>();
        model.config.tau = c.at("tau").get<double>();
        model.terms = h.at("terms").get<std::vector<std::string>>();
        model.chunk_ids = h.at("chunk_ids").get<std::vector<std::string>>();
        model.log_likelihood = h.at("log_likelihood").get<std::vector<double>>();
        const auto K = h.at("K").get<std::size_t>();
        const auto V = h.at("V").get<std::size_t>();
        const auto D = h.at("D").get<std::size_t>();
        if (V != model.terms.size() || D != model.chunk_ids.size())
            throw ValidationError("lda model header is inconsistent");
        model.phi = Matrix(K, V);
        model.theta = Matrix(D, K);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("lda model header: " + std::string(e.what()));
    }
    for (double& v : model.phi.data) v = read_le<double>(in);
    for (double& v : model.theta.data) v = read_le<double>(in);
    for (std::size_t d = 0; d < model.theta.rows; ++d) (void)read_le<std::int32_t>(in);
    return model;
}

}  // namespace fundtext::lda
