#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mcsim/link.hpp"

namespace mcsim {

// Configuration or value errors that should exit with code 2 at the CLI.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Parses `key = value` lines ('#' starts a comment, blank lines ignored). Unknown
// and duplicate keys are rejected with their line number. `profile` is applied
// before explicit keys regardless of position, so explicit values always win.
// The resolved config is validated before being returned.
LinkConfig parse_config_text(const std::string& text);
LinkConfig load_config_file(const std::string& path);

// Canonical form: fixed key order, one `key = value` per line. Parsing the output
// and serialising again reproduces it byte for byte.
std::string serialize_config(const LinkConfig& cfg);

// "A:B:STEP" in dB, e.g. "-10:20:1".
SnrGrid parse_snr_range(const std::string& text);

// CSV with header modulation,snr_db,eb_n0_db,bits,errors,ber,trials; rows sorted
// by (modulation, snr_db) with modulations in constellation-size order; ber in
// scientific notation with six significant digits. Formatting is locale-free, so
// equal records serialise to identical bytes.
std::string csv_from_records(std::vector<BerRecord> records);

}  // namespace mcsim
