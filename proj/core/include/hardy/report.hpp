#pragma once

#include <json.hpp>

#include "hardy/bloomkerman.hpp"
#include "hardy/classify.hpp"
#include "hardy/config.hpp"
#include "hardy/verifier.hpp"
#include "hardy/weights.hpp"

namespace hardy {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolName = "hardyct";
inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::ordered_json;

/// Doubles with non-finite values rendered as the strings "inf"/"-inf"/"nan"
/// so reports stay valid JSON.
json jnum(double v);

json to_json(const Config& cfg);
json to_json(const Certificate& cert);
json to_json(const ModularResult& m);
json to_json(const MembershipVerdict& m, bool include_trace);
json to_json(const VerificationReport& r);
json to_json(const NormReport& r);
json to_json(const BKVerdict& v);
json to_json(const SharpnessResult& s);

/// Common envelope: schema version, tool identity, command, input echo.
json report_envelope(const std::string& command, json input_echo, const Config& cfg);

}  // namespace hardy
