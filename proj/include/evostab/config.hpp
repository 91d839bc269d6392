#pragma once

#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "evostab/evolution.hpp"
#include "evostab/exponent.hpp"
#include "evostab/green.hpp"
#include "evostab/mild.hpp"
#include "evostab/models.hpp"
#include "evostab/signal.hpp"
#include "evostab/stability.hpp"

namespace evostab {

using Json = nlohmann::json;

/// Parses either JSON (first non-space character '{') or the key/value
/// format: one `dotted.key = value` per line, '#' comments. Both encode
/// the same nested schema.
Json parse_config_text(const std::string& text);
Json load_config_file(const std::string& path);

/// FNV-1a over the canonical dump; embedded in every report for provenance.
std::string config_hash(const Json& cfg);

Grid grid_from_config(const Json& cfg);
MildSolveConfig solver_from_config(const Json& cfg, double default_dt);

/// A constructed model: the family to study plus, when the model is built
/// from a propagator and a reaction, the two halves separately.
struct ModelBundle {
    std::string kind;
    std::size_t dim = 1;
    EvolutionFamily family;
    std::optional<EvolutionFamily> linear_part;
    std::optional<Nonlinearity> reaction;
    std::shared_ptr<SpectralHeatModel> heat;
    std::shared_ptr<const ScalarField> field;
};

/// kind = closed_form_linear | scalar_h | spectral_heat. closed_form_linear
/// takes `rate`; scalar_h takes `h` (preset) and `h_param`; spectral_heat
/// takes `n_modes`. Any model may add a reaction `g` (preset) + `g_param`.
ModelBundle build_model(const Json& cfg, const MildSolveConfig& solver);

Exponent exponent_from(const Json& v);

Json signal_to_json(const SampledSignal& s);
SampledSignal signal_from_json(const Json& j);

Json report_to_json(const AdmissibilityReport& rep);
Json report_to_json(const StabilityCertificate& cert);
Json report_to_json(const StabilityClassification& cls);
Json report_to_json(const L1LinfCharacterization& rep);
Json report_to_json(const BoundednessReport& rep);
Json report_to_json(const LipschitzEstimate& est);

} // namespace evostab
