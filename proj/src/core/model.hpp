#ifndef MLRANK_CORE_MODEL_HPP_
#define MLRANK_CORE_MODEL_HPP_

#include <map>
#include <span>
#include <string>
#include <variant>

#include "core/learners.hpp"
#include "core/wbr.hpp"

namespace mlrank {

enum class Method { kWbrAda, kWbrLogreg, kPairwiseLinear, kPairwiseStumps };

const char* method_name(Method method);
Method method_from_name(const std::string& name);

// A trained multilabel ranker of any supported kind, together with the
// weight function it was trained under and free-form provenance, as stored
// on disk.
struct ModelFile {
  std::variant<WbrModel, PairwiseLinearModel, PairwiseStumpModel> model;
  WeightSpec train_weight;
  std::map<std::string, std::string> provenance;

  Method method() const;
  int labels() const;
  int dimension() const;
  ScoreVector predict(std::span<const double> x) const;
};

// Versioned self-describing JSON; doubles round-trip exactly.
std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);

void save_model(const ModelFile& file, const std::string& path);
ModelFile load_model(const std::string& path);

}  // namespace mlrank

#endif  // MLRANK_CORE_MODEL_HPP_
