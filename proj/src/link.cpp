#include "mcsim/link.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mcsim {

void SnrGrid::validate() const {
  if (!(step_db > 0.0)) {
    throw std::invalid_argument("snr_step_db must be positive");
  }
  if (stop_db < start_db) {
    throw std::invalid_argument("snr_stop_db must be >= snr_start_db");
  }
}

std::vector<double> SnrGrid::points() const {
  validate();
  std::vector<double> out;
  auto count = static_cast<std::size_t>(
      std::floor((stop_db - start_db) / step_db + 1e-9));
  out.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    out.push_back(start_db + static_cast<double>(i) * step_db);
  }
  return out;
}

void LinkConfig::validate() const {
  if (modulations.empty()) {
    throw std::invalid_argument("at least one modulation is required");
  }
  OfdmParams{subcarriers, cp_len}.validate();
  snr.validate();
  if (frame_bits == 0) {
    throw std::invalid_argument("frame_bits must be positive");
  }
  if (max_bits < 10'000) {
    throw std::invalid_argument("max_bits must be at least 10000");
  }
  if (target_errors < 1) {
    throw std::invalid_argument("target_errors must be at least 1");
  }
  if (tx_antennas != 1 && tx_antennas != 2) {
    throw std::invalid_argument("tx_antennas must be 1 or 2");
  }
  if (rx_antennas < 1 || rx_antennas > 4) {
    throw std::invalid_argument("rx_antennas must be between 1 and 4");
  }
  if (tx_antennas == 1 && rx_antennas != 1) {
    throw std::invalid_argument("the SISO reference chain requires rx_antennas = 1");
  }
  if (users < 1) {
    throw std::invalid_argument("users must be at least 1");
  }
  if (users > 1 && !enable_spreading) {
    throw std::invalid_argument("multiple users require spreading");
  }
  if (!enable_channel && tx_antennas != 1) {
    throw std::invalid_argument("channel bypass requires the SISO chain");
  }
  // Surface generator/LFSR contract violations at configuration time.
  ConvCode probe_code(conv_g1, conv_g2);
  PnCode probe_pn(pn_taps, pn_seed, spreading_factor, 0);
  if (enable_spreading && users > probe_pn.period()) {
    throw std::invalid_argument("users must be at most the PN sequence period");
  }
}

double LinkConfig::info_bits_per_symbol(Modulation m) const {
  double bps = scheme(m).bits_per_symbol;
  double rate = 1.0;
  if (enable_fec) {
    ConvCode code(conv_g1, conv_g2);
    rate = static_cast<double>(frame_bits) /
           static_cast<double>(2 * (frame_bits + code.memory()));
  }
  double sf = enable_spreading ? static_cast<double>(spreading_factor) : 1.0;
  return bps * rate / sf;
}

double LinkConfig::eb_n0_db(Modulation m, double snr_db) const {
  return snr_db - 10.0 * std::log10(info_bits_per_symbol(m));
}

namespace {

// Immutable per-(config, modulation) context shared by all trials of a sweep
// point; every member is used const, so worker threads can share one instance.
struct Engine {
  const LinkConfig& cfg;
  Modulation mod;
  ConvCode conv;
  OfdmModem ofdm;
  std::vector<PnCode> pn;  // one phase per user
  const ModScheme& sch;

  Engine(const LinkConfig& c, Modulation m)
      : cfg(c),
        mod(m),
        conv(c.conv_g1, c.conv_g2),
        ofdm(OfdmParams{c.subcarriers, c.cp_len}),
        sch(scheme(m)) {
    pn.reserve(cfg.users);
    for (unsigned u = 0; u < cfg.users; ++u) {
      pn.emplace_back(cfg.pn_taps, cfg.pn_seed, cfg.spreading_factor, u);
    }
  }

  TrialResult trial(SnrPoint snr, std::uint64_t index) const;

 private:
  BitStream transmit_bits(std::uint64_t index, BitStream& user0_info) const;
  void alamouti_chain(const std::vector<cd>& symbols, SnrPoint snr, Substream& chan,
                      Substream& noise, std::vector<cd>& rx_symbols,
                      std::uint64_t& resampled) const;
  void siso_chain(const std::vector<cd>& symbols, SnrPoint snr, Substream& chan,
                  Substream& noise, std::vector<cd>& rx_symbols,
                  std::uint64_t& resampled) const;
};

// Payload -> FEC -> spreading -> multi-user composite, re-binarised by sign
// (tie -> bit 0). Returns the modem-ready bit stream; user0_info receives the
// reference payload that errors are counted against.
BitStream Engine::transmit_bits(std::uint64_t index, BitStream& user0_info) const {
  std::vector<BitStream> coded(cfg.users);
  for (unsigned u = 0; u < cfg.users; ++u) {
    Substream info(derive_stream_key(cfg.seed, index, kTagInfoBits + u));
    BitStream payload(cfg.frame_bits);
    for (auto& b : payload) b = info.next_bit();
    if (u == 0) user0_info = payload;
    coded[u] = cfg.enable_fec ? conv.encode(payload) : std::move(payload);
  }

  if (!cfg.enable_spreading) {
    return coded[0];
  }
  ChipStream composite = spread(coded[0], pn[0]);
  for (unsigned u = 1; u < cfg.users; ++u) {
    ChipStream c = spread(coded[u], pn[u]);
    for (std::size_t i = 0; i < composite.size(); ++i) composite[i] += c[i];
  }
  BitStream tx(composite.size());
  for (std::size_t i = 0; i < composite.size(); ++i) {
    tx[i] = composite[i] < 0.0 ? 1 : 0;
  }
  return tx;
}

// Alamouti per subcarrier across OFDM symbol pairs. The flat channel applies one
// matrix per subcarrier per pair to the receiver-side transforms of the antenna
// waveforms; AWGN is added per subcarrier (the transform is unitary, so the noise
// law is the same as adding it per sample).
void Engine::alamouti_chain(const std::vector<cd>& symbols, SnrPoint snr,
                            Substream& chan, Substream& noise,
                            std::vector<cd>& rx_symbols,
                            std::uint64_t& resampled) const {
  const std::size_t n = cfg.subcarriers;
  const std::size_t pairs = symbols.size() / (2 * n);
  rx_symbols.assign(symbols.size(), cd(0.0, 0.0));

  std::vector<ChannelMatrix> h(n);
  std::vector<cd> f[2][2];
  std::vector<cd> x[2][2];
  std::vector<cd> y[2];  // per slot, all antennas concatenated: [a * n + k]
  std::vector<std::array<cd, 2>> y_block(cfg.rx_antennas);

  for (std::size_t p = 0; p < pairs; ++p) {
    const cd* A = symbols.data() + p * 2 * n;
    const cd* B = A + n;
    for (int ant = 0; ant < 2; ++ant) {
      for (int slot = 0; slot < 2; ++slot) f[ant][slot].resize(n);
    }
    for (std::size_t k = 0; k < n; ++k) {
      StbcBlock sb = stbc_encode(A[k], B[k]);
      for (int slot = 0; slot < 2; ++slot) {
        for (int ant = 0; ant < 2; ++ant) f[ant][slot][k] = sb.slot[slot][ant];
      }
    }
    // Antenna waveforms with cyclic prefix, then the receiver-side transform of
    // each (an exact round trip; the per-subcarrier channel acts on these).
    for (int ant = 0; ant < 2; ++ant) {
      for (int slot = 0; slot < 2; ++slot) {
        x[ant][slot] = ofdm.demodulate(ofdm.modulate(f[ant][slot]));
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      rayleigh_draw_into(chan, h[k], cfg.rx_antennas, 2);
      while (cfg.enable_channel && h[k].frob_sq() < 1e-12) {
        rayleigh_draw_into(chan, h[k], cfg.rx_antennas, 2);
        ++resampled;
      }
    }
    for (int slot = 0; slot < 2; ++slot) {
      y[slot].assign(cfg.rx_antennas * n, cd(0.0, 0.0));
      for (unsigned a = 0; a < cfg.rx_antennas; ++a) {
        for (std::size_t k = 0; k < n; ++k) {
          y[slot][a * n + k] = h[k].rows[a][0] * x[0][slot][k] +
                               h[k].rows[a][1] * x[1][slot][k];
        }
      }
      y[slot] = awgn_add(y[slot], snr, noise);
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (unsigned a = 0; a < cfg.rx_antennas; ++a) {
        y_block[a] = {y[0][a * n + k], y[1][a * n + k]};
      }
      ZfOutput zf = zf_combine(y_block, h[k]);
      rx_symbols[p * 2 * n + k] = zf.s1;
      rx_symbols[p * 2 * n + n + k] = zf.s2;
    }
  }
}

// SISO reference chain: one complex gain per subcarrier per OFDM symbol, matched
// filter combining (the 1x1 zero-forcing solution).
void Engine::siso_chain(const std::vector<cd>& symbols, SnrPoint snr,
                        Substream& chan, Substream& noise,
                        std::vector<cd>& rx_symbols,
                        std::uint64_t& resampled) const {
  const std::size_t n = cfg.subcarriers;
  const std::size_t blocks = symbols.size() / n;
  rx_symbols.assign(symbols.size(), cd(0.0, 0.0));
  std::vector<cd> h(n);
  std::vector<cd> f(n);

  for (std::size_t b = 0; b < blocks; ++b) {
    std::copy(symbols.begin() + b * n, symbols.begin() + (b + 1) * n, f.begin());
    std::vector<cd> x = ofdm.demodulate(ofdm.modulate(f));
    for (std::size_t k = 0; k < n; ++k) {
      if (cfg.enable_channel) {
        h[k] = chan.next_cgauss(1.0);
        while (std::norm(h[k]) < 1e-12) {
          h[k] = chan.next_cgauss(1.0);
          ++resampled;
        }
      } else {
        h[k] = cd(1.0, 0.0);
      }
      x[k] *= h[k];
    }
    x = awgn_add(x, snr, noise);
    for (std::size_t k = 0; k < n; ++k) {
      rx_symbols[b * n + k] = std::conj(h[k]) * x[k] / std::norm(h[k]);
    }
  }
}

TrialResult Engine::trial(SnrPoint snr, std::uint64_t index) const {
  TrialResult res;
  res.bits = cfg.frame_bits;

  BitStream user0_info;
  BitStream tx_bits = transmit_bits(index, user0_info);
  const std::size_t payload_len = tx_bits.size();

  const std::size_t slots = (cfg.tx_antennas == 2) ? 2 : 1;
  const std::size_t block_bits = sch.bits_per_symbol * cfg.subcarriers * slots;
  const std::size_t padded =
      (payload_len + block_bits - 1) / block_bits * block_bits;
  tx_bits.resize(padded, 0);

  std::vector<cd> symbols = modulate(tx_bits, mod);

  Substream chan(derive_stream_key(cfg.seed, index, kTagChannel));
  Substream noise(derive_stream_key(cfg.seed, index, kTagNoise));
  std::vector<cd> rx_symbols;
  if (cfg.tx_antennas == 2) {
    alamouti_chain(symbols, snr, chan, noise, rx_symbols, res.resampled_channels);
  } else {
    siso_chain(symbols, snr, chan, noise, rx_symbols, res.resampled_channels);
  }

  BitStream rx_bits = demodulate(rx_symbols, mod);
  rx_bits.resize(payload_len);

  BitStream coded;
  if (cfg.enable_spreading) {
    ChipStream chips(rx_bits.size());
    for (std::size_t i = 0; i < rx_bits.size(); ++i) chips[i] = bipolar(rx_bits[i]);
    coded = despread(chips, pn[0]);
  } else {
    coded = std::move(rx_bits);
  }
  BitStream decoded = cfg.enable_fec ? conv.decode(coded) : std::move(coded);
  res.errors = hamming_distance(decoded, user0_info);
  return res;
}

}  // namespace

TrialResult run_trial(const LinkConfig& cfg, Modulation m, SnrPoint snr,
                      std::uint64_t trial_index) {
  cfg.validate();
  Engine engine(cfg, m);
  return engine.trial(snr, trial_index);
}

namespace {

// One wave of trials [t0, t1); stopping is only evaluated between waves, so the
// set of executed trials is a pure function of the accumulated integer tallies.
void run_wave(const Engine& engine, SnrPoint snr, std::uint64_t t0, std::uint64_t t1,
              unsigned threads, std::uint64_t& bits, std::uint64_t& errors) {
  if (threads <= 1) {
    for (std::uint64_t t = t0; t < t1; ++t) {
      TrialResult r = engine.trial(snr, t);
      bits += r.bits;
      errors += r.errors;
    }
    return;
  }
  unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(threads, t1 - t0));
  std::atomic<std::uint64_t> next{t0};
  std::vector<std::array<std::uint64_t, 2>> partial(workers, {0, 0});
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      std::uint64_t b = 0;
      std::uint64_t e = 0;
      for (;;) {
        std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
        if (t >= t1) break;
        TrialResult r = engine.trial(snr, t);
        b += r.bits;
        e += r.errors;
      }
      partial[w] = {b, e};
    });
  }
  for (auto& th : pool) th.join();
  // Integer sums commute, so the merged tallies do not depend on scheduling.
  for (const auto& pe : partial) {
    bits += pe[0];
    errors += pe[1];
  }
}

}  // namespace

std::vector<BerRecord> run_sweep(const LinkConfig& cfg, unsigned threads) {
  cfg.validate();
  if (threads == 0) threads = 1;
  constexpr std::uint64_t kWaveTrials = 64;

  std::vector<BerRecord> records;
  for (Modulation m : cfg.modulations) {
    Engine engine(cfg, m);
    for (double snr_db : cfg.snr.points()) {
      SnrPoint snr{snr_db};
      std::uint64_t bits = 0;
      std::uint64_t errors = 0;
      std::uint64_t trials = 0;
      while (errors < cfg.target_errors && bits < cfg.max_bits) {
        run_wave(engine, snr, trials, trials + kWaveTrials, threads, bits, errors);
        trials += kWaveTrials;
      }
      records.push_back(BerRecord{m, snr_db, cfg.eb_n0_db(m, snr_db), bits, errors,
                                  static_cast<double>(errors) /
                                      static_cast<double>(bits),
                                  trials});
    }
  }
  return records;
}

double rayleigh_diversity_ber(double gamma_c, unsigned branches) {
  double mu = std::sqrt(gamma_c / (1.0 + gamma_c));
  double p = 0.5 * (1.0 - mu);
  double q = 0.5 * (1.0 + mu);
  // sum_{k<L} C(L-1+k, k) p^L q^k
  double ber = 0.0;
  double coeff = 1.0;
  double qk = 1.0;
  for (unsigned k = 0; k < branches; ++k) {
    if (k > 0) {
      coeff = coeff * static_cast<double>(branches - 1 + k) / static_cast<double>(k);
      qk *= q;
    }
    ber += coeff * qk;
  }
  return ber * std::pow(p, static_cast<double>(branches));
}

}  // namespace mcsim
