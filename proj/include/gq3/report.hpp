#pragma once

// JSON renderings of the library's results. Key order is fixed so that
// reports are byte-identical across runs.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gq3/cohomod.hpp"
#include "gq3/kmilnor.hpp"

namespace gq3 {

using Json = nlohmann::ordered_json;

/// version, seed, q, n, class_bound
Json report_header(std::uint64_t seed, int q, int n, int class_bound);

Json to_json(const ZqSubspace& w);
Json to_json(const GroupInvariants& inv);
Json to_json(const CohomologyData& cd);
/// Accepts the layout produced by to_json(CohomologyData); entries are reduced mod q.
CohomologyData cohomology_data_from_json(const Json& j);

Json truncate_report(const Presentation& pres, std::uint64_t seed);
Json cohomology_report(const Presentation& pres, std::uint64_t seed);
Json relator_images_report(const Presentation& pres, int class_bound, std::uint64_t seed);
Json screen_report(const Presentation& pres, const ScreenOptions& opts, std::uint64_t seed);
Json to_json(const MorphismReport& m);
Json to_json(const GradedAlgebra& a);
Json to_json(const GaloisComparison& g);

}  // namespace gq3
