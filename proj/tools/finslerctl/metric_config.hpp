#pragma once

// JSON metric configs:
//   {kind, dim, params, periodicity, derivative_mode, fd_step, name}
// Unknown keys are rejected everywhere.

#include <string>

#include "finsler/metric.hpp"
#include "json.hpp"

namespace finslerctl {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public finsler::InvalidArgument {
 public:
  using finsler::InvalidArgument::InvalidArgument;
};

Json read_json_file(const std::string& path);

/// Rejects keys of `obj` outside `allowed`.
void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where);

double get_real(const Json& v, const std::string& where);
int get_int(const Json& v, const std::string& where);
finsler::Vec get_vec(const Json& v, int n, const std::string& where);
finsler::Mat get_mat(const Json& v, int n, const std::string& where);

finsler::ModelPtr build_metric(const Json& config);
/// A metric given either inline or as a path to a JSON file; `resolved`
/// receives the config object actually used.
finsler::ModelPtr load_metric(const Json& spec, Json* resolved = nullptr);

}  // namespace finslerctl
