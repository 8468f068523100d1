#pragma once

#include <filesystem>
#include <vector>

#include "fundtext/lda/lda.hpp"

namespace fundtext::lda {

// Model file layout, version 1:
//   bytes 0..15   magic "FUNDTEXT-LDA\0\0\0\x01"
//   u64 LE        length H of the JSON header
//   H bytes       UTF-8 JSON: {"format_version","config","K","V","D","terms","chunk_ids","log_likelihood"}
//   K*V f64 LE    phi, row-major
//   D*K f64 LE    theta, row-major
//   D   i32 LE    argmax topic per chunk at the configured tau (-1 = outlier)
// Count matrices are not persisted.

void save_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_model(const std::filesystem::path& path);

}  // namespace fundtext::lda
