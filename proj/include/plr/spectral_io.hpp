#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "plr/errors.hpp"
#include "plr/experiment.hpp"
#include "plr/spectral.hpp"

namespace plr {

// Debugging dump of a decomposition with the disorder provenance attached.
// Not a stability contract.
inline void dump_decomposition(const std::string& path, const DisorderConfig& config,
                               const SpectralDecomposition& spec) {
  json cols = json::array();
  for (std::size_t k = 0; k < spec.n; ++k) {
    json col = json::array();
    for (std::size_t i = 0; i < spec.n; ++i) col.push_back(spec.column(k)[i]);
    cols.push_back(std::move(col));
  }
  const json doc{{"provenance", disorder_to_json(config)},
                 {"n", spec.n},
                 {"eigenvalues", spec.eigenvalues},
                 {"eigenvectors", std::move(cols)}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << doc.dump() << "\n";
}

}  // namespace plr
