#pragma once

#include <string>
#include <vector>

#include "macvlc/channel.hpp"
#include "macvlc/regions.hpp"
#include "macvlc/simharness.hpp"

namespace macvlc {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// {"x1_size":..,"x2_size":..,"y_size":..,"transition":[flat x1-major]}
McChannel parse_channel_json(const std::string& text, const std::string& origin = "<json>");
McChannel load_channel_json(const std::string& path);
std::string channel_to_json(const McChannel& ch);

// accepts a builtin name ("adder", "noisy_adder(0.1)", ...) or a file path
McChannel resolve_channel(const std::string& arg);

// {"type":"random"|"concat"|"mixed","m1":..,"m2":..,
//  "lambda":..?,"phase1_rates_bits":[..,..]?,"epsilon":..?,"seed":..}
SchemeSpec parse_scheme_json(const std::string& text, const std::string& origin = "<json>");
SchemeSpec load_scheme_json(const std::string& path);

std::string fmt6(double v);  // fixed, 6 decimals

std::string region_to_csv(const RateRegion& region);
std::string region_to_json(const RateRegion& region);

const char* rule_name(DecodeRule r);
DecodeRule rule_from_name(const std::string& name);

// summary + config echo; worker count deliberately omitted so output is
// invariant to how the trials were scheduled
std::string summary_to_json(const SimSummary& s, const SchemeSpec& scheme,
                            const DecoderConfig& dec, uint64_t trials,
                            uint64_t master_seed, const std::string& channel_desc);

std::string records_to_csv(const std::vector<TrialRecord>& records);

} // namespace macvlc
