#pragma once

#include "ecalc/eform.hpp"
#include "ecalc/multivec.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ecalc {

using Json = nlohmann::json;

/// {"dim", "vars", "rank", "kind", "generators": [[comp, ...], ...],
///  "singular_factors": [...], "z_locus": [...]}.  Reading also accepts a
/// plain name ("b2"), {"name": ...}, or the hyperplane shorthand
/// {"dim": n, "hyperplanes": [1, 2, ...]}.  Shipped kinds are restored when
/// the generators match, so a round trip preserves kind-dependent behaviour.
Json frame_to_json(const EFramePtr& fr);
EFramePtr frame_from_json(const Json& j);

/// Name, inline JSON text, or path of a JSON file.
EFramePtr frame_from_spec(const std::string& spec);

/// {"frame": ..., "degree": p, "terms": [{"indices": [1,2], "coeff": "..."}]}
/// An explicit `frame` argument overrides the embedded one on read.
Json form_to_json(const EForm& w);
EForm form_from_json(const Json& j, EFramePtr frame = nullptr);

/// Same layout plus "basis": "frame" | "ambient".
Json multivec_to_json(const MultiVec& m);
MultiVec multivec_from_json(const Json& j, EFramePtr frame = nullptr);

std::uint64_t fnv1a64(const std::string& text);
/// 16-hex-digit FNV-1a digest of the canonical (sorted-key) dump.
std::string input_digest(const Json& inputs);

struct CliVerdict {
    std::string name;
    bool pass = false;
};

struct CliReport {
    std::string command;
    std::string digest;
    std::vector<CliVerdict> verdicts;
    std::vector<std::pair<std::string, double>> residuals;
    int exit_status = 0;
    Json data; ///< command-specific payload

    bool all_pass() const;
};

Json report_to_json(const CliReport& r);
CliReport report_from_json(const Json& j);

} // namespace ecalc
