#ifndef SPARSEWARN_MODEL_IO_HPP
#define SPARSEWARN_MODEL_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sparsewarn/dictionary.hpp"
#include "sparsewarn/network.hpp"
#include "sparsewarn/normalize.hpp"
#include "sparsewarn/pca.hpp"

namespace sparsewarn {

/// Fitted components of one fold's pipeline, as persisted in the model
/// container: magic "SWRN1", a length-prefixed text manifest, then one
/// length-prefixed little-endian f64 blob per component in manifest order.
struct ModelBundle {
  std::map<std::string, std::string> info;  // method, seeds, version, fold...
  std::optional<Projector> projector;
  std::optional<NormStats> norm;
  std::optional<Dictionary> dict;
  std::optional<RidgeDenoiser> denoiser;
  std::optional<PlaneLayout> plane;
  std::optional<std::string> network_manifest;
  std::vector<double> network_params;
};

void save_model_bundle(const std::string& path, const ModelBundle& bundle);
ModelBundle load_model_bundle(const std::string& path);

/// Human-readable view: the manifest plus per-blob byte counts.
std::string inspect_model(const std::string& path);

}  // namespace sparsewarn

#endif
