#include "taufpl/model_io.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "taufpl/error.hpp"

namespace taufpl {

using json = nlohmann::ordered_json;

std::string model_to_json(const ModelFile& mf) {
  const Classifier& c = mf.classifier;
  json j;
  j["version"] = kModelVersion;
  j["created"] = mf.created;
  j["tau"] = c.model.tau;
  j["R"] = c.model.R;
  j["weights"] = c.model.weights;
  j["threshold"] = c.threshold;
  j["threshold_std"] = c.threshold_std;
  j["scale_factor"] = c.model.scale.factor;
  j["rounds"] = c.rounds;
  j["iterations"] = c.model.iterations;
  j["converged"] = c.model.converged;
  j["final_dual"] = c.model.final_dual;
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<std::string>() != kModelVersion) {
      throw DataError("unrecognized model version '" + j.at("version").get<std::string>() + "'");
    }
    ModelFile mf;
    mf.created = j.value("created", std::string());
    Classifier& c = mf.classifier;
    c.model.tau = j.at("tau").get<double>();
    c.model.R = j.at("R").get<double>();
    c.model.weights = j.at("weights").get<std::vector<double>>();
    c.threshold = j.at("threshold").get<double>();
    c.threshold_std = j.value("threshold_std", 0.0);
    c.model.scale.factor = j.at("scale_factor").get<double>();
    c.rounds = j.value("rounds", std::size_t{0});
    c.model.iterations = j.value("iterations", std::size_t{0});
    c.model.converged = j.value("converged", false);
    c.model.final_dual = j.value("final_dual", 0.0);
    if (c.model.weights.empty()) throw DataError("model has no weights");
    if (!(c.model.scale.factor > 0.0)) throw DataError("model scale_factor must be positive");
    return mf;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::string& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file '" + path + "'");
  out << model_to_json(model);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string creation_timestamp() {
  std::time_t t;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
    t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace taufpl
