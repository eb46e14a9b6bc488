#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "csit/floquet.hpp"
#include "csit/general_model.hpp"
#include "csit/poincare.hpp"
#include "csit/scan.hpp"

namespace csit::io {

using json = nlohmann::json;

/// %.17g.
std::string format_double(double v);

// CSV writers. Each file opens with a `# run_config: {...}` comment line
// when run_config is not null.
void write_ephemeris_csv(std::ostream& os, double t0, double t1, int n, const ModelParams& params,
                         const json& run_config = nullptr);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const json& run_config = nullptr);
void write_trace_csv(std::ostream& os, const TraceCurve& curve, const json& run_config = nullptr);
void write_section_csv(std::ostream& os, const SectionCloud& cloud, const json& run_config = nullptr);

json verdict_json(const Monodromy& m, const StabilityVerdict& v);
json intervals_json(const StabilityIntervals& iv);
json trace_json(const TraceCurve& curve); // skipped points and metadata, no samples
json census_json(const CensusResult& c);
json bound_report_json(const curves::BoundReport& b);
json section_manifest_json(const SectionCloud& cloud);

} // namespace csit::io
