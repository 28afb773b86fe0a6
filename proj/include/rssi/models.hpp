#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string_view>

#include "rssi/cart.hpp"
#include "rssi/ensemble.hpp"
#include "rssi/linreg.hpp"
#include "rssi/svr.hpp"

namespace rssi {

/// Declaration order is the report row order.
enum class ModelKind { linear, svr, tree, forest, gbt };

inline constexpr std::array<ModelKind, 5> kAllModelKinds{
    ModelKind::linear, ModelKind::svr, ModelKind::tree, ModelKind::forest, ModelKind::gbt};

std::string_view to_string(ModelKind kind) noexcept;
std::string_view display_name(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view name);

struct ModelConfigs {
  SvrParams svr{};
  TreeParams tree{};
  ForestParams forest{};
  GbtParams gbt{};
};

/// Fits one family. `seed` replaces the seeds stored in the configs.
std::unique_ptr<Regressor> fit_model(ModelKind kind, const ModelConfigs& configs,
                                     const Dataset& train, Seed seed);

void write_model(const Regressor& model, std::ostream& out);
void save_model(const Regressor& model, const std::filesystem::path& path);
std::unique_ptr<Regressor> read_model(std::istream& in);
std::unique_ptr<Regressor> load_model(const std::filesystem::path& path);

}  // namespace rssi
