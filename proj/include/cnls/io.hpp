#pragma once

#include <cstdint>
#include <string>

#include "cnls/model.hpp"

// Result serialization: profiles as (x, U, V) CSV with a JSON sidecar for
// the parameters. All numbers are written with 17 significant digits so the
// round trip is bit-exact.

namespace cnls::io {

std::string format_double(double v);

std::string profile_to_csv(const model::WaveProfile& w);
model::WaveProfile profile_from_csv(const std::string& csv);

std::string params_to_json(const model::ModelParams& p);
model::ModelParams params_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// FNV-1a 64-bit content hash used by run manifests.
std::uint64_t fnv1a64(const std::string& data);

}  // namespace cnls::io
