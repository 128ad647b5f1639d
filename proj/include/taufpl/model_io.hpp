#pragma once

#include <string>

#include "taufpl/thresholding.hpp"

namespace taufpl {

inline constexpr const char* kModelVersion = "taufpl-model/1";

/// Persistent classifier. `created` is an ISO-8601 UTC timestamp.
struct ModelFile {
  Classifier classifier;
  std::string created;
};

std::string model_to_json(const ModelFile& model);
/// Throws DataError on an unrecognized version, empty weights or a
/// non-positive scale factor.
ModelFile model_from_json(const std::string& text);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

/// SOURCE_DATE_EPOCH when set (reproducible output), otherwise the current time.
std::string creation_timestamp();

}  // namespace taufpl
