#pragma once

#include <json.hpp>
#include <string>

#include "anisofreq/geometry.hpp"
#include "anisofreq/optimizer.hpp"
#include "anisofreq/quadform.hpp"
#include "anisofreq/solver.hpp"
#include "anisofreq/verification.hpp"

namespace anisofreq {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// %.17g; non-finite values become "nan"/"inf" strings in JSON.
std::string format_number(double v);

/// Serializes with every floating-point number printed to 17 significant
/// digits, so equal doubles always give equal bytes.
std::string dump_json(const Json& j, int indent = 2);

/// Writes to `path` through a temporary sibling and a rename.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

Json to_json(const QuadForm& q);
QuadForm quadform_from_json(const Json& j);

Json to_json(const DomainSpec& d);
/// {"type":"disk","radius":r[,"center":[x,y]]}, {"type":"rectangle","hw":w,"hh":h},
/// {"type":"polygon","vertices":[[x,y],...]}, {"type":"ellipse","center":[x,y],"map":[[a,b],[c,d]]}
/// plus the named shapes {"type":"square"}, {"type":"lshape"} and {"type":"ra","a":a}.
DomainSpec domain_from_json(const Json& j);

Json to_json(const GradientMetric& g);
Json to_json(const SolverOptions& o);
Json to_json(const OptimizeOptions& o);
/// Everything but the eigenfunction, which goes to CSV.
Json to_json(const EigenResult& r);
Json to_json(const OptimizeResult& r);
Json to_json(const VerificationEntry& e);
Json to_json(const VerificationReport& r);

/// {"schema_version", "timestamp", "payload"}. Only the payload is covered by
/// the determinism contract.
Json envelope(Json payload, const std::string& timestamp);
/// UTC, ISO 8601.
std::string utc_timestamp();

/// x,y,u per node.
std::string eigenfunction_csv(const Mesh& m, const std::vector<double>& u);
/// theta,lambda per grid sample.
std::string profile_csv(const std::vector<ProfileSample>& samples);

}  // namespace anisofreq
