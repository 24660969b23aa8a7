#include "core/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mlrank {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "mlrank-model";

json weight_to_json(const WeightSpec& spec) {
  json out;
  switch (spec.kind()) {
    case WeightSpec::Kind::kConstant:
      out["kind"] = "constant";
      out["value"] = spec.constant_value();
      break;
    case WeightSpec::Kind::kPairwiseNormalized:
      out["kind"] = "normalized";
      break;
    case WeightSpec::Kind::kTable: {
      out["kind"] = "table";
      json entries = json::array();
      for (const auto& [y, w] : spec.table_entries()) {
        json entry;
        entry["labels"] = y.bits;
        entry["weight"] = w;
        entries.push_back(std::move(entry));
      }
      out["entries"] = std::move(entries);
      break;
    }
  }
  return out;
}

WeightSpec weight_from_json(const json& doc) {
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "constant")
    return WeightSpec::constant(doc.at("value").get<double>());
  if (kind == "normalized") return WeightSpec::pairwise_normalized();
  if (kind == "table") {
    std::map<LabelVector, double> entries;
    for (const json& entry : doc.at("entries")) {
      LabelVector y(entry.at("labels").get<std::vector<std::uint8_t>>());
      y.validate();
      entries[y] = entry.at("weight").get<double>();
    }
    return WeightSpec::table(std::move(entries));
  }
  fail(ErrorCode::kParse, "unknown weight kind '" + kind + "'");
}

json standardizer_to_json(const std::optional<Standardizer>& s) {
  if (!s) return nullptr;
  json out;
  out["mean"] = s->mean;
  out["scale"] = s->scale;
  return out;
}

std::optional<Standardizer> standardizer_from_json(const json& doc) {
  if (doc.is_null()) return std::nullopt;
  Standardizer s;
  s.mean = doc.at("mean").get<std::vector<double>>();
  s.scale = doc.at("scale").get<std::vector<double>>();
  require(s.mean.size() == s.scale.size(), ErrorCode::kParse,
          "standardizer mean/scale length mismatch");
  return s;
}

json ensembles_to_json(const std::vector<StumpEnsemble>& models) {
  json out = json::array();
  for (const StumpEnsemble& ensemble : models) {
    json stumps = json::array();
    for (const Stump& s : ensemble.stumps) {
      json stump;
      stump["feature"] = s.feature;
      stump["threshold"] = s.threshold;
      stump["left"] = s.left_value;
      stump["right"] = s.right_value;
      stumps.push_back(std::move(stump));
    }
    out.push_back(std::move(stumps));
  }
  return out;
}

std::vector<StumpEnsemble> ensembles_from_json(const json& doc, int d) {
  std::vector<StumpEnsemble> out;
  for (const json& stumps : doc) {
    StumpEnsemble ensemble;
    ensemble.dimension = d;
    for (const json& s : stumps) {
      Stump stump;
      stump.feature = s.at("feature").get<int>();
      stump.threshold = s.at("threshold").get<double>();
      stump.left_value = s.at("left").get<double>();
      stump.right_value = s.at("right").get<double>();
      require(stump.feature >= 0 && stump.feature < d, ErrorCode::kParse,
              "stump feature index out of range");
      ensemble.stumps.push_back(stump);
    }
    out.push_back(std::move(ensemble));
  }
  return out;
}

json linears_to_json(const std::vector<LinearModel>& models) {
  json out = json::array();
  for (const LinearModel& model : models) {
    json entry;
    entry["coefficients"] = model.coefficients;
    entry["intercept"] = model.intercept;
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<LinearModel> linears_from_json(const json& doc, int d) {
  std::vector<LinearModel> out;
  for (const json& entry : doc) {
    LinearModel model;
    model.coefficients = entry.at("coefficients").get<std::vector<double>>();
    model.intercept = entry.at("intercept").get<double>();
    require(model.coefficients.size() == static_cast<std::size_t>(d),
            ErrorCode::kParse, "linear model dimension mismatch");
    out.push_back(std::move(model));
  }
  return out;
}

void check_finite(const ModelFile& file) {
  auto check = [](double v) {
    require(std::isfinite(v), ErrorCode::kInvalidArgument,
            "model contains a non-finite value");
  };
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, WbrModel>) {
          for (const StumpEnsemble& e : model.stumps)
            for (const Stump& s : e.stumps) {
              check(s.threshold);
              check(s.left_value);
              check(s.right_value);
            }
          for (const LinearModel& l : model.linear) {
            for (double c : l.coefficients) check(c);
            check(l.intercept);
          }
        } else if constexpr (std::is_same_v<T, PairwiseLinearModel>) {
          for (const LinearModel& l : model.per_label) {
            for (double c : l.coefficients) check(c);
            check(l.intercept);
          }
        } else {
          for (const StumpEnsemble& e : model.per_label)
            for (const Stump& s : e.stumps) {
              check(s.threshold);
              check(s.left_value);
              check(s.right_value);
            }
        }
      },
      file.model);
}

}  // namespace

const char* method_name(Method method) {
  switch (method) {
    case Method::kWbrAda:
      return "wbr-ada";
    case Method::kWbrLogreg:
      return "wbr-logreg";
    case Method::kPairwiseLinear:
      return "pairwise-log";
    case Method::kPairwiseStumps:
      return "pairwise-stumps";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "wbr-ada") return Method::kWbrAda;
  if (name == "wbr-logreg") return Method::kWbrLogreg;
  if (name == "pairwise-log") return Method::kPairwiseLinear;
  if (name == "pairwise-stumps") return Method::kPairwiseStumps;
  fail(ErrorCode::kInvalidArgument, "unknown method '" + name + "'");
}

Method ModelFile::method() const {
  if (const auto* wbr = std::get_if<WbrModel>(&model))
    return wbr->learner == WbrModel::Learner::kAdaStumps ? Method::kWbrAda
                                                         : Method::kWbrLogreg;
  if (std::holds_alternative<PairwiseLinearModel>(model))
    return Method::kPairwiseLinear;
  return Method::kPairwiseStumps;
}

int ModelFile::labels() const {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WbrModel>)
          return m.m;
        else
          return static_cast<int>(m.per_label.size());
      },
      model);
}

int ModelFile::dimension() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, WbrModel>) {
          return m.d;
        } else if constexpr (std::is_same_v<T, PairwiseLinearModel>) {
          return m.per_label.empty()
                     ? 0
                     : static_cast<int>(m.per_label[0].coefficients.size());
        } else {
          return m.per_label.empty() ? 0 : m.per_label[0].dimension;
        }
      },
      model);
}

ScoreVector ModelFile::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict_scores(x); }, model);
}

std::string model_to_json(const ModelFile& file) {
  check_finite(file);
  json doc;
  doc["format"] = kFormatName;
  doc["version"] = kFormatVersion;
  doc["kind"] = method_name(file.method());
  doc["m"] = file.labels();
  doc["d"] = file.dimension();
  doc["train_weight"] = weight_to_json(file.train_weight);
  doc["provenance"] = file.provenance;

  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, WbrModel>) {
          doc["standardizer"] = standardizer_to_json(model.standardizer);
          if (model.learner == WbrModel::Learner::kAdaStumps)
            doc["stump_models"] = ensembles_to_json(model.stumps);
          else
            doc["linear_models"] = linears_to_json(model.linear);
        } else if constexpr (std::is_same_v<T, PairwiseLinearModel>) {
          doc["standardizer"] = standardizer_to_json(model.standardizer);
          doc["linear_models"] = linears_to_json(model.per_label);
        } else {
          doc["standardizer"] = nullptr;
          doc["stump_models"] = ensembles_to_json(model.per_label);
        }
      },
      file.model);
  return doc.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("model JSON: ") + e.what());
  }
  try {
    require(doc.at("format").get<std::string>() == kFormatName,
            ErrorCode::kParse, "not a model file");
    require(doc.at("version").get<int>() == kFormatVersion, ErrorCode::kParse,
            "unsupported model format version");

    ModelFile file;
    const Method method = method_from_name(doc.at("kind").get<std::string>());
    const int m = doc.at("m").get<int>();
    const int d = doc.at("d").get<int>();
    require(m >= 2 && d >= 1, ErrorCode::kParse, "bad model dimensions");
    file.train_weight = weight_from_json(doc.at("train_weight"));
    if (doc.contains("provenance"))
      file.provenance =
          doc.at("provenance").get<std::map<std::string, std::string>>();

    const auto standardizer = standardizer_from_json(doc.at("standardizer"));
    if (standardizer)
      require(standardizer->mean.size() == static_cast<std::size_t>(d),
              ErrorCode::kParse, "standardizer dimension mismatch");

    switch (method) {
      case Method::kWbrAda:
      case Method::kWbrLogreg: {
        WbrModel model;
        model.learner = method == Method::kWbrAda
                            ? WbrModel::Learner::kAdaStumps
                            : WbrModel::Learner::kLogreg;
        model.m = m;
        model.d = d;
        model.weight_spec = file.train_weight;
        model.standardizer = standardizer;
        if (method == Method::kWbrAda)
          model.stumps = ensembles_from_json(doc.at("stump_models"), d);
        else
          model.linear = linears_from_json(doc.at("linear_models"), d);
        const std::size_t count = method == Method::kWbrAda
                                      ? model.stumps.size()
                                      : model.linear.size();
        require(count == static_cast<std::size_t>(m), ErrorCode::kParse,
                "per-label model count does not match m");
        file.model = std::move(model);
        break;
      }
      case Method::kPairwiseLinear: {
        PairwiseLinearModel model;
        model.per_label = linears_from_json(doc.at("linear_models"), d);
        model.standardizer = standardizer;
        require(model.per_label.size() == static_cast<std::size_t>(m),
                ErrorCode::kParse, "per-label model count does not match m");
        file.model = std::move(model);
        break;
      }
      case Method::kPairwiseStumps: {
        PairwiseStumpModel model;
        model.per_label = ensembles_from_json(doc.at("stump_models"), d);
        require(model.per_label.size() == static_cast<std::size_t>(m),
                ErrorCode::kParse, "per-label model count does not match m");
        file.model = std::move(model);
        break;
      }
    }
    check_finite(file);
    return file;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("model JSON: ") + e.what());
  }
}

void save_model(const ModelFile& file, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  out << model_to_json(file);
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace mlrank
