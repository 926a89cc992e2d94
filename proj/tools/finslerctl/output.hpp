#pragma once

// Report encodings. Reals are written with 17 significant digits and
// non-finite values as the strings "+inf", "-inf" and "nan", so a report
// is a pure function of its inputs and diffs cleanly.

#include <string>
#include <utility>
#include <vector>

#include "finsler/types.hpp"
#include "metric_config.hpp"

namespace finslerctl {

Json num(double v);
Json num_array(const finsler::Vec& v);
Json num_matrix(const finsler::Mat& m);
Json named_values(const std::vector<std::pair<std::string, double>>& values);

std::string format_real(double v);

std::string to_json_text(const Json& doc);

/// Two columns, "key,value"; keys are dotted paths, array elements use their
/// index as the path component.
std::string to_csv_text(const Json& doc);

/// (path, value text) pairs in document order, shared by both encodings.
std::vector<std::pair<std::string, std::string>> flatten(const Json& doc);

}  // namespace finslerctl
