// Command-line front end: Monte-Carlo BER sweeps, closed-form calibration of the
// uncoded reference chains, constellation dumps, and a fast self-check.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error, 3 a calibration or
// selftest check failed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcsim/io.hpp"
#include "mcsim/link.hpp"

namespace {

using namespace mcsim;

struct SweepOptions {
  std::string config_path;
  std::vector<std::string> mods;
  std::string snr_range;
  std::string profile;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
};

LinkConfig resolve_config(const SweepOptions& opt) {
  LinkConfig cfg;
  if (!opt.config_path.empty()) cfg = load_config_file(opt.config_path);
  if (!opt.profile.empty()) {
    if (opt.profile == "desk") {
      cfg.profile = Profile::Desk;
      cfg.subcarriers = 64;
      cfg.cp_len = 12;
    } else if (opt.profile == "paper") {
      cfg.profile = Profile::Paper;
      cfg.subcarriers = 6400;
      cfg.cp_len = 1280;
    } else {
      throw ConfigError("profile must be desk or paper");
    }
  }
  if (!opt.mods.empty()) {
    cfg.modulations.clear();
    for (const std::string& name : opt.mods) {
      auto m = modulation_from_name(name);
      if (!m) throw ConfigError("unknown modulation '" + name + "'");
      cfg.modulations.push_back(*m);
    }
  }
  if (!opt.snr_range.empty()) cfg.snr = parse_snr_range(opt.snr_range);
  if (opt.seed_set) cfg.seed = opt.seed;
  cfg.validate();
  return cfg;
}

int cmd_sweep(const SweepOptions& opt) {
  LinkConfig cfg = resolve_config(opt);
  std::vector<BerRecord> records = run_sweep(cfg, opt.threads);
  std::string csv = csv_from_records(records);
  if (opt.out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + opt.out_path);
    out << csv;
  }
  return 0;
}

// Measures one uncoded QPSK operating point with the configured antenna setup.
double measure_uncoded(unsigned tx, unsigned rx, double snr_db, std::uint64_t seed,
                       unsigned threads) {
  LinkConfig cfg;
  cfg.modulations = {Modulation::QPSK};
  cfg.enable_fec = false;
  cfg.enable_spreading = false;
  cfg.tx_antennas = tx;
  cfg.rx_antennas = rx;
  cfg.seed = seed;
  cfg.frame_bits = 4096;
  cfg.max_bits = 1'000'000;
  cfg.target_errors = ~std::uint64_t{0};  // run to the bit budget
  cfg.snr = SnrGrid{snr_db, snr_db, 1.0};
  std::vector<BerRecord> rec = run_sweep(cfg, threads);
  return rec.at(0).ber;
}

int cmd_calibrate(std::uint64_t seed, unsigned threads) {
  struct Point {
    const char* chain;
    unsigned tx, rx;
    double snr_db;
    unsigned branches;
  };
  // Per-branch per-bit SNR: matched-filter SISO sees gamma_s/2 on one branch;
  // the two-antenna space-time chain sees gamma_s/4 on 2*rx branches (the
  // transmit power split halves each branch).
  const Point points[] = {
      {"siso 1x1", 1, 1, 0.0, 1},  {"siso 1x1", 1, 1, 5.0, 1},
      {"siso 1x1", 1, 1, 10.0, 1}, {"stbc 2x1", 2, 1, 0.0, 2},
      {"stbc 2x1", 2, 1, 5.0, 2},  {"stbc 2x1", 2, 1, 10.0, 2},
      {"stbc 2x3", 2, 3, 0.0, 6},  {"stbc 2x3", 2, 3, 3.0, 6},
      {"stbc 2x3", 2, 3, 6.0, 6},
  };
  bool all_ok = true;
  std::printf("%-10s %8s %12s %12s %7s\n", "chain", "es_n0", "theory", "measured",
              "verdict");
  for (const Point& p : points) {
    double gamma_s = std::pow(10.0, p.snr_db / 10.0);
    double gamma_c = (p.tx == 1) ? gamma_s / 2.0 : gamma_s / 4.0;
    double theory = rayleigh_diversity_ber(gamma_c, p.branches);
    double measured = measure_uncoded(p.tx, p.rx, p.snr_db, seed, threads);
    double se = std::sqrt(theory * (1.0 - theory) / 1.0e6);
    double tol = std::max(0.10 * theory, 4.0 * se);
    bool ok = std::abs(measured - theory) <= tol;
    all_ok = all_ok && ok;
    std::printf("%-10s %7.1f %12.5e %12.5e %7s\n", p.chain, p.snr_db, theory,
                measured, ok ? "ok" : "FAIL");
  }
  if (!all_ok) {
    std::fprintf(stderr, "calibrate: measured BER outside tolerance\n");
    return 3;
  }
  std::printf("calibrate: all points within tolerance\n");
  return 0;
}

int cmd_dump_constellation(const std::string& name) {
  auto m = modulation_from_name(name);
  if (!m) throw ConfigError("unknown modulation '" + name + "'");
  const ModScheme& s = scheme(*m);
  std::printf("name %s\n", s.name);
  std::printf("bits_per_symbol %u\n", s.bits_per_symbol);
  std::printf("min_distance %.9g\n", s.min_distance);
  std::printf("label,bits,i,q\n");
  for (std::size_t label = 0; label < s.points.size(); ++label) {
    std::string bits(s.bits_per_symbol, '0');
    for (unsigned b = 0; b < s.bits_per_symbol; ++b) {
      if (label >> (s.bits_per_symbol - 1 - b) & 1u) bits[b] = '1';
    }
    std::printf("%zu,%s,%.9g,%.9g\n", label, bits.c_str(), s.points[label].real(),
                s.points[label].imag());
  }
  return 0;
}

bool check(bool ok, const char* what, bool& all_ok) {
  std::printf("%s: %s\n", ok ? "ok" : "FAIL", what);
  all_ok = all_ok && ok;
  return ok;
}

int cmd_selftest() {
  bool all_ok = true;

  ConvCode code;
  BitStream impulse_out = code.encode({1, 0, 0, 0});
  check(impulse_out == BitStream{1, 1, 1, 1, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0},
        "convolutional impulse response", all_ok);
  BitStream msg{1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1};
  BitStream coded = code.encode(msg);
  coded[3] ^= 1;
  coded[20] ^= 1;
  check(code.decode(coded) == msg, "two channel flips corrected", all_ok);

  PnCode pn(013, 1, 8);
  check(pn.period() == 7, "default sequence period", all_ok);
  BitStream pat{0, 1, 1, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1};
  check(despread(spread(pat, pn), pn) == pat, "spreading round trip", all_ok);

  Dft dft(60);
  std::vector<cd> imp(60, cd(0, 0));
  imp[0] = cd(1, 0);
  std::vector<cd> spec = dft.forward(imp);
  bool flat = true;
  for (const cd& v : spec) flat = flat && std::abs(v - cd(1.0 / std::sqrt(60.0), 0)) < 1e-12;
  check(flat, "transform of an impulse is flat", all_ok);

  bool modem_ok = true;
  for (Modulation m : kAllModulations) {
    const ModScheme& s = scheme(m);
    BitStream all_labels;
    for (std::size_t label = 0; label < s.points.size(); ++label) {
      for (unsigned b = 0; b < s.bits_per_symbol; ++b) {
        all_labels.push_back((label >> (s.bits_per_symbol - 1 - b)) & 1u);
      }
    }
    modem_ok = modem_ok && demodulate(modulate(all_labels, m), m) == all_labels;
  }
  check(modem_ok, "hard demapping inverts every label", all_ok);

  Substream rng(derive_stream_key(7, 0, kTagChannel));
  ChannelMatrix h = rayleigh_draw(rng, 3, 2);
  cd s1(0.6, -0.8), s2(-1.0, 0.25);
  StbcBlock blk = stbc_encode(s1, s2);
  std::vector<std::array<cd, 2>> y(3);
  for (unsigned a = 0; a < 3; ++a) {
    for (unsigned t = 0; t < 2; ++t) {
      y[a][t] = h.rows[a][0] * blk.slot[t][0] + h.rows[a][1] * blk.slot[t][1];
    }
  }
  ZfOutput zf = zf_combine(y, h);
  check(std::abs(zf.s1 - s1) < 1e-12 && std::abs(zf.s2 - s2) < 1e-12,
        "space-time combining is exact without noise", all_ok);

  LinkConfig cfg;
  cfg.users = 2;
  bool loopback = true;
  for (Modulation m : kAllModulations) {
    TrialResult r = run_trial(cfg, m, SnrPoint::noiseless(), 0);
    loopback = loopback && r.errors == 0;
  }
  check(loopback, "noiseless two-user loopback is error free", all_ok);

  if (!all_ok) {
    std::fprintf(stderr, "selftest: at least one check failed\n");
    return 3;
  }
  std::printf("selftest: all checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIMO multi-carrier CDMA link simulator"};
  app.require_subcommand(1);

  SweepOptions sweep_opt;
  CLI::App* sweep = app.add_subcommand("sweep", "run a BER sweep and emit CSV");
  sweep->add_option("--config", sweep_opt.config_path, "configuration file");
  sweep->add_option("--mod", sweep_opt.mods,
                    "modulation to include (repeatable); overrides the config");
  sweep->add_option("--snr", sweep_opt.snr_range, "grid START:STOP:STEP in dB");
  sweep->add_option("--profile", sweep_opt.profile, "desk or paper geometry");
  sweep->add_option("--out", sweep_opt.out_path, "write CSV here instead of stdout");
  auto* seed_opt = sweep->add_option("--seed", sweep_opt.seed, "master seed");
  sweep->add_option("--threads", sweep_opt.threads, "worker threads");

  std::uint64_t cal_seed = 1;
  unsigned cal_threads = 1;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "compare uncoded chains against closed-form fading BER");
  calibrate->add_option("--seed", cal_seed, "master seed");
  calibrate->add_option("--threads", cal_threads, "worker threads");

  std::string dump_mod;
  CLI::App* dump = app.add_subcommand("dump-constellation",
                                      "print one constellation as CSV");
  dump->add_option("--mod", dump_mod, "modulation name")->required();

  CLI::App* selftest = app.add_subcommand("selftest", "run fast internal checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  sweep_opt.seed_set = seed_opt->count() > 0;

  try {
    if (sweep->parsed()) return cmd_sweep(sweep_opt);
    if (calibrate->parsed()) return cmd_calibrate(cal_seed, cal_threads);
    if (dump->parsed()) return cmd_dump_constellation(dump_mod);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
