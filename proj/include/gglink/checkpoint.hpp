#pragma once

#include <cstdint>
#include <filesystem>

#include "gglink/decoder.hpp"
#include "gglink/encoder.hpp"
#include "gglink/json_util.hpp"

namespace gglink {

// Everything needed to rebuild the model for evaluation. JSON numbers carry
// the full 64-bit values (shortest round-trip serialization), so save/load
// is lossless.
struct Checkpoint {
    EncoderParams params;
    DecoderKind decoder;
    std::size_t embedding_dim = 0;
    std::uint64_t init_seed = 0;
};

namespace detail {

inline Json matrix_to_json(const Matrix& m) {
    return Json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

inline Matrix matrix_from_json(const Json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols) throw ParseError("matrix data length mismatch");
    return m;
}

}  // namespace detail

inline void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    Json j;
    j["format"] = "gglink-checkpoint";
    j["version"] = 1;
    j["encoder"] = {{"kind", to_string(ckpt.params.kind)},
                    {"neighbor_mode", to_string(ckpt.params.neighbor_mode)},
                    {"mass_outside_norm", ckpt.params.mass_outside_norm},
                    {"w1", detail::matrix_to_json(ckpt.params.w1)},
                    {"b1", ckpt.params.b1},
                    {"w2", detail::matrix_to_json(ckpt.params.w2)},
                    {"b2", ckpt.params.b2}};
    j["decoder"] = {{"type", to_string(ckpt.decoder.type)}, {"eps_dist", ckpt.decoder.eps_dist}};
    j["embedding_dim"] = ckpt.embedding_dim;
    j["init_seed"] = ckpt.init_seed;
    save_json_file(j, path);
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
    const Json j = load_json_file(path);
    if (j.value("format", "") != "gglink-checkpoint")
        throw ParseError(path.string() + ": not a gglink checkpoint");
    Checkpoint c;
    const Json& e = j.at("encoder");
    c.params.kind = encoder_kind_from_string(e.at("kind").get<std::string>());
    c.params.neighbor_mode = neighbor_mode_from_string(e.at("neighbor_mode").get<std::string>());
    c.params.mass_outside_norm = e.at("mass_outside_norm").get<bool>();
    c.params.w1 = detail::matrix_from_json(e.at("w1"));
    c.params.b1 = e.at("b1").get<std::vector<double>>();
    c.params.w2 = detail::matrix_from_json(e.at("w2"));
    c.params.b2 = e.at("b2").get<std::vector<double>>();
    c.decoder.type = decoder_type_from_string(j.at("decoder").at("type").get<std::string>());
    c.decoder.eps_dist = j.at("decoder").at("eps_dist").get<double>();
    c.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    c.init_seed = j.at("init_seed").get<std::uint64_t>();
    return c;
}

}  // namespace gglink
