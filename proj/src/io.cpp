#include "mcsim/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace mcsim {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_u64(std::string_view v, std::size_t line,
                        const std::string& key, int base = 10) {
  std::uint64_t out = 0;
  bool any = false;
  for (char c : v) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else {
      fail(line, "invalid value for '" + key + "'");
    }
    if (digit >= base) fail(line, "invalid value for '" + key + "'");
    if (out > (~std::uint64_t{0} - static_cast<unsigned>(digit)) /
                  static_cast<unsigned>(base)) {
      fail(line, "value for '" + key + "' is out of range");
    }
    out = out * static_cast<unsigned>(base) + static_cast<unsigned>(digit);
    any = true;
  }
  if (!any) fail(line, "invalid value for '" + key + "'");
  return out;
}

double parse_double(std::string_view v, std::size_t line, const std::string& key) {
  std::string s(v);
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    fail(line, "invalid value for '" + key + "'");
  }
  if (pos != s.size()) fail(line, "invalid value for '" + key + "'");
  return out;
}

bool parse_switch(std::string_view v, std::size_t line, const std::string& key) {
  if (v == "on") return true;
  if (v == "off") return false;
  fail(line, "value for '" + key + "' must be on or off");
}

std::vector<Modulation> parse_modulations(std::string_view v, std::size_t line) {
  std::vector<Modulation> out;
  while (!v.empty()) {
    std::size_t comma = v.find(',');
    std::string_view item = trim(v.substr(0, comma));
    auto m = modulation_from_name(item);
    if (!m) fail(line, "unknown modulation '" + std::string(item) + "'");
    out.push_back(*m);
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) fail(line, "invalid value for 'modulation'");
  return out;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

std::string format_octal(unsigned x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%o", x);
  return buf;
}

}  // namespace

LinkConfig parse_config_text(const std::string& text) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;  // file order, so later keys override profile

  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(line_no, "expected 'key = value'");
    if (auto it = entries.find(key); it != entries.end()) {
      fail(line_no, "duplicate key '" + key + "'");
    }
    entries.emplace(key, Entry{value, line_no});
    order.push_back(key);
  }

  LinkConfig cfg;

  // The profile sets the transform geometry first; explicit keys then override.
  if (auto it = entries.find("profile"); it != entries.end()) {
    const auto& [v, ln] = it->second;
    if (v == "desk") {
      cfg.profile = Profile::Desk;
      cfg.subcarriers = 64;
      cfg.cp_len = 12;
    } else if (v == "paper") {
      cfg.profile = Profile::Paper;
      cfg.subcarriers = 6400;
      cfg.cp_len = 1280;
    } else {
      fail(ln, "profile must be desk or paper");
    }
  }

  for (const std::string& key : order) {
    const auto& [v, ln] = entries.at(key);
    if (key == "profile") {
      continue;  // already applied
    } else if (key == "modulation") {
      cfg.modulations = parse_modulations(v, ln);
    } else if (key == "conv_generators") {
      std::size_t comma = v.find(',');
      if (comma == std::string::npos) {
        fail(ln, "conv_generators must be two octal values 'g1,g2'");
      }
      cfg.conv_g1 = static_cast<unsigned>(
          parse_u64(trim(std::string_view(v).substr(0, comma)), ln, key, 8));
      cfg.conv_g2 = static_cast<unsigned>(
          parse_u64(trim(std::string_view(v).substr(comma + 1)), ln, key, 8));
    } else if (key == "pn_taps") {
      cfg.pn_taps = static_cast<unsigned>(parse_u64(v, ln, key, 8));
    } else if (key == "pn_seed") {
      cfg.pn_seed = static_cast<std::uint32_t>(parse_u64(v, ln, key));
    } else if (key == "spreading_factor") {
      cfg.spreading_factor = static_cast<unsigned>(parse_u64(v, ln, key));
    } else if (key == "users") {
      cfg.users = static_cast<unsigned>(parse_u64(v, ln, key));
    } else if (key == "subcarriers") {
      cfg.subcarriers = static_cast<std::size_t>(parse_u64(v, ln, key));
    } else if (key == "cp_len") {
      cfg.cp_len = static_cast<std::size_t>(parse_u64(v, ln, key));
    } else if (key == "tx_antennas") {
      cfg.tx_antennas = static_cast<unsigned>(parse_u64(v, ln, key));
    } else if (key == "rx_antennas") {
      cfg.rx_antennas = static_cast<unsigned>(parse_u64(v, ln, key));
    } else if (key == "snr_start_db") {
      cfg.snr.start_db = parse_double(v, ln, key);
    } else if (key == "snr_stop_db") {
      cfg.snr.stop_db = parse_double(v, ln, key);
    } else if (key == "snr_step_db") {
      cfg.snr.step_db = parse_double(v, ln, key);
    } else if (key == "seed") {
      cfg.seed = parse_u64(v, ln, key);
    } else if (key == "frame_bits") {
      cfg.frame_bits = static_cast<std::size_t>(parse_u64(v, ln, key));
    } else if (key == "max_bits") {
      cfg.max_bits = parse_u64(v, ln, key);
    } else if (key == "target_errors") {
      cfg.target_errors = parse_u64(v, ln, key);
    } else if (key == "enable_fec") {
      cfg.enable_fec = parse_switch(v, ln, key);
    } else if (key == "enable_spreading") {
      cfg.enable_spreading = parse_switch(v, ln, key);
    } else if (key == "enable_channel") {
      cfg.enable_channel = parse_switch(v, ln, key);
    } else {
      fail(ln, "unknown key '" + key + "'");
    }
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

LinkConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string serialize_config(const LinkConfig& cfg) {
  std::ostringstream out;
  out << "profile = " << (cfg.profile == Profile::Paper ? "paper" : "desk") << '\n';
  out << "modulation = ";
  for (std::size_t i = 0; i < cfg.modulations.size(); ++i) {
    if (i) out << ',';
    out << modulation_name(cfg.modulations[i]);
  }
  out << '\n';
  out << "conv_generators = " << format_octal(cfg.conv_g1) << ','
      << format_octal(cfg.conv_g2) << '\n';
  out << "pn_taps = " << format_octal(cfg.pn_taps) << '\n';
  out << "pn_seed = " << cfg.pn_seed << '\n';
  out << "spreading_factor = " << cfg.spreading_factor << '\n';
  out << "users = " << cfg.users << '\n';
  out << "subcarriers = " << cfg.subcarriers << '\n';
  out << "cp_len = " << cfg.cp_len << '\n';
  out << "tx_antennas = " << cfg.tx_antennas << '\n';
  out << "rx_antennas = " << cfg.rx_antennas << '\n';
  out << "snr_start_db = " << format_double(cfg.snr.start_db) << '\n';
  out << "snr_stop_db = " << format_double(cfg.snr.stop_db) << '\n';
  out << "snr_step_db = " << format_double(cfg.snr.step_db) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "frame_bits = " << cfg.frame_bits << '\n';
  out << "max_bits = " << cfg.max_bits << '\n';
  out << "target_errors = " << cfg.target_errors << '\n';
  out << "enable_fec = " << (cfg.enable_fec ? "on" : "off") << '\n';
  out << "enable_spreading = " << (cfg.enable_spreading ? "on" : "off") << '\n';
  out << "enable_channel = " << (cfg.enable_channel ? "on" : "off") << '\n';
  return out.str();
}

SnrGrid parse_snr_range(const std::string& text) {
  std::size_t c1 = text.find(':');
  std::size_t c2 = (c1 == std::string::npos) ? std::string::npos
                                             : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      text.find(':', c2 + 1) != std::string::npos) {
    throw ConfigError("snr range must be START:STOP:STEP");
  }
  SnrGrid grid;
  grid.start_db = parse_double(trim(std::string_view(text).substr(0, c1)), 0, "snr");
  grid.stop_db =
      parse_double(trim(std::string_view(text).substr(c1 + 1, c2 - c1 - 1)), 0, "snr");
  grid.step_db = parse_double(trim(std::string_view(text).substr(c2 + 1)), 0, "snr");
  try {
    grid.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return grid;
}

std::string csv_from_records(std::vector<BerRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const BerRecord& a, const BerRecord& b) {
                     if (a.modulation != b.modulation) {
                       return static_cast<int>(a.modulation) <
                              static_cast<int>(b.modulation);
                     }
                     return a.snr_db < b.snr_db;
                   });
  std::string out = "modulation,snr_db,eb_n0_db,bits,errors,ber,trials\n";
  char buf[160];
  for (const BerRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%.4f,%llu,%llu,%.5e,%llu\n",
                  modulation_name(r.modulation), r.snr_db, r.eb_n0_db,
                  static_cast<unsigned long long>(r.bits),
                  static_cast<unsigned long long>(r.errors), r.ber,
                  static_cast<unsigned long long>(r.trials));
    out += buf;
  }
  return out;
}

}  // namespace mcsim
