#include "rssi/models.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include "model_io.hpp"
#include "rssi/error.hpp"

namespace rssi {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::linear: return "linear";
    case ModelKind::svr: return "svr";
    case ModelKind::tree: return "tree";
    case ModelKind::forest: return "forest";
    case ModelKind::gbt: return "gbt";
  }
  return "unknown";
}

std::string_view display_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::linear: return "Linear Regression";
    case ModelKind::svr: return "Support Vector Regression";
    case ModelKind::tree: return "Decision Tree";
    case ModelKind::forest: return "Random Forest Regression";
    case ModelKind::gbt: return "Gradient Boosting Tree";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  for (const auto k : kAllModelKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorKind::config, "unknown model kind '" + std::string(name) +
                                     "' (expected linear, svr, tree, forest or gbt)");
}

std::unique_ptr<Regressor> fit_model(ModelKind kind, const ModelConfigs& configs,
                                     const Dataset& train, Seed seed) {
  switch (kind) {
    case ModelKind::linear:
      return std::make_unique<LinearModel>(fit_linear(train));
    case ModelKind::svr:
      return std::make_unique<SvrModel>(fit_svr(train, configs.svr, seed));
    case ModelKind::tree:
      return std::make_unique<RegressionTree>(fit_tree(train, configs.tree, seed));
    case ModelKind::forest: {
      auto p = configs.forest;
      p.seed = seed;
      return std::make_unique<ForestModel>(fit_forest(train, p));
    }
    case ModelKind::gbt: {
      auto p = configs.gbt;
      p.seed = seed;
      return std::make_unique<GbtModel>(fit_gbt(train, p));
    }
  }
  throw Error(ErrorKind::config, "unknown model kind");
}

void write_model(const Regressor& model, std::ostream& out) {
  out << "rssi-model 1\nkind " << model.kind() << '\n';
  model.write(out);
}

void save_model(const Regressor& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  write_model(model, out);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

std::unique_ptr<Regressor> read_model(std::istream& in) {
  io::LineReader reader(in);
  if (reader.integer("rssi-model") != 1) reader.fail("unsupported model format version");
  const auto kind = parse_model_kind(reader.word("kind"));
  switch (kind) {
    case ModelKind::linear: return std::make_unique<LinearModel>(LinearModel::read(reader));
    case ModelKind::svr: return std::make_unique<SvrModel>(SvrModel::read(reader));
    case ModelKind::tree: return std::make_unique<RegressionTree>(RegressionTree::read(reader));
    case ModelKind::forest: return std::make_unique<ForestModel>(ForestModel::read(reader));
    case ModelKind::gbt: return std::make_unique<GbtModel>(GbtModel::read(reader));
  }
  reader.fail("unknown model kind");
}

std::unique_ptr<Regressor> load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  return read_model(in);
}

}  // namespace rssi
