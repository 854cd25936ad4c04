// foveastream: foveated-streaming simulator and gaze analytics toolkit.
//
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "foveastream/analytics.hpp"
#include "foveastream/errors.hpp"
#include "foveastream/foveation.hpp"
#include "foveastream/gaze.hpp"
#include "foveastream/grid.hpp"
#include "foveastream/ratemodel.hpp"
#include "foveastream/session.hpp"
#include "foveastream/telemetry.hpp"
#include "foveastream/udp.hpp"

namespace fs = foveastream;

namespace {

struct GridFlags {
  int width = 1920;
  int height = 1080;
  int mb_size = 16;

  fs::GridSpec make() const { return fs::GridSpec(width, height, mb_size); }
};

void add_grid_flags(CLI::App* cmd, GridFlags& flags) {
  cmd->add_option("--width", flags.width, "Frame width in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--height", flags.height, "Frame height in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--mb-size", flags.mb_size, "Macroblock size in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

struct FovFlags {
  double qo_max = 10.0;
  double w_frac = 0.125;
  double w_px = 0.0;  // 0 = derive from w_frac; flag validation forbids 0
  double base_qp = 28.0;

  fs::FoveationParams make(const fs::GridSpec& grid) const {
    if (w_px > 0.0) {
      fs::FoveationParams params{qo_max, w_px, base_qp};
      fs::validate(params);
      return params;
    }
    return fs::params_from_fraction(qo_max, w_frac, grid, base_qp);
  }
};

void add_fov_flags(CLI::App* cmd, FovFlags& flags) {
  cmd->add_option("--qo-max", flags.qo_max, "Maximum QP offset")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--w-frac", flags.w_frac,
                  "Foveal width as a fraction of frame width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--w-px", flags.w_px,
                  "Foveal width in pixels (overrides --w-frac)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--base-qp", flags.base_qp, "Base QP the offsets add to")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 51.0));
}

struct RateFlags {
  double ref_bits = 50.0;
  double qp_step = 6.0;
  std::string weights_path;

  fs::RateModel make() const {
    fs::RateModel model;
    model.ref_bits_per_mb = ref_bits;
    model.qp_halving_step = qp_step;
    if (!weights_path.empty()) {
      model.weight_map = fs::load_weight_map_csv(weights_path);
    }
    return model;
  }
};

void add_rate_flags(CLI::App* cmd, RateFlags& flags) {
  cmd->add_option("--ref-bits", flags.ref_bits,
                  "Reference bits per macroblock at base QP")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--qp-step", flags.qp_step, "QP increase that halves the rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--weights", flags.weights_path,
                  "CSV of per-macroblock content weights");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

fs::GazeTrace load_trace_or_fail(const std::string& path,
                                 const fs::GridSpec& grid) {
  return fs::load_trace(std::filesystem::path(path), grid);
}

// --sweep qo_max=0,5,10,15 or --sweep w_frac=0.25,0.125,0.0625
std::vector<fs::FoveationParams> parse_sweep(const std::string& sweep,
                                             const FovFlags& base,
                                             const fs::GridSpec& grid) {
  const std::size_t eq = sweep.find('=');
  if (eq == std::string::npos) {
    throw fs::DomainError("--sweep wants key=v1,v2,... got '" + sweep + "'");
  }
  const std::string key = sweep.substr(0, eq);
  if (key != "qo_max" && key != "w_frac") {
    throw fs::DomainError("--sweep key must be qo_max or w_frac, got '" + key +
                          "'");
  }
  std::vector<double> values;
  std::stringstream ss(sweep.substr(eq + 1));
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      values.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) {
        throw std::invalid_argument(cell);
      }
    } catch (const std::exception&) {
      throw fs::DomainError("bad sweep value '" + cell + "'");
    }
  }
  if (values.empty()) {
    throw fs::DomainError("--sweep needs at least one value");
  }

  std::vector<fs::FoveationParams> list;
  list.reserve(values.size());
  for (double v : values) {
    if (key == "qo_max") {
      list.push_back(fs::params_from_fraction(v, base.w_frac, grid, base.base_qp));
    } else {
      list.push_back(fs::params_from_fraction(base.qo_max, v, grid, base.base_qp));
    }
  }
  return list;
}

int run_serve(const std::string& host, std::uint16_t port,
              const fs::GridSpec& grid, std::uint64_t count, int wait_ms) {
  fs::UdpReceiver receiver(host, port);
  fs::LatestGazeCell cell;
  std::uint64_t accepted = 0;
  std::printf("listening on %s:%u\n", host.c_str(), port);
  std::fflush(stdout);
  while (count == 0 || accepted < count) {
    const std::vector<std::uint8_t> datagram = receiver.receive(wait_ms);
    if (datagram.empty()) {
      if (count == 0) {
        continue;
      }
      std::fprintf(stderr, "timed out after %d ms without a datagram\n",
                   wait_ms);
      return 1;
    }
    fs::GazeMessage msg;
    try {
      msg = fs::decode(datagram);
    } catch (const fs::DecodeError& e) {
      std::printf("undecodable datagram: %s\n", e.what());
      std::fflush(stdout);
      continue;
    }
    const auto now = std::chrono::steady_clock::now().time_since_epoch();
    const std::int64_t now_us =
        std::chrono::duration_cast<std::chrono::microseconds>(now).count();
    if (cell.offer(msg, now_us)) {
      ++accepted;
      const fs::PixelPoint px = fs::clamp_to_frame(
          grid,
          fs::PixelPoint{static_cast<double>(msg.x_norm) * grid.frame_width_px(),
                         static_cast<double>(msg.y_norm) * grid.frame_height_px()});
      std::printf("accepted seq=%u t_us=%llu norm=(%.6f,%.6f) px=(%.1f,%.1f)\n",
                  msg.seq, static_cast<unsigned long long>(msg.timestamp_us),
                  static_cast<double>(msg.x_norm),
                  static_cast<double>(msg.y_norm), px.x_px, px.y_px);
    } else {
      std::printf("rejected seq=%u (stale)\n", msg.seq);
    }
    std::fflush(stdout);
  }
  return 0;
}

int run_send(const std::string& host, std::uint16_t port,
             const fs::GazeTrace& trace, bool pace) {
  fs::UdpSender sender(host, port);
  std::uint64_t sent = 0;
  std::int64_t prev_ts = -1;
  for (const fs::GazeSample& s : trace.samples) {
    if (!s.valid) {
      continue;
    }
    if (pace && prev_ts >= 0) {
      std::this_thread::sleep_for(
          std::chrono::microseconds(s.timestamp_us - prev_ts));
    }
    prev_ts = s.timestamp_us;

    const fs::PixelPoint p = fs::clamp_to_frame(trace.grid, s.point);
    fs::GazeMessage msg;
    msg.seq = s.seq;
    msg.timestamp_us = static_cast<std::uint64_t>(s.timestamp_us);
    msg.x_norm = static_cast<float>(p.x_px / trace.grid.frame_width_px());
    msg.y_norm = static_cast<float>(p.y_px / trace.grid.frame_height_px());
    try {
      sender.send(fs::encode(msg));
    } catch (const std::runtime_error& e) {
      // A refused datagram usually means the receiver hit its --count and
      // left; say how far the stream got instead of a bare errno string.
      throw std::runtime_error(std::string(e.what()) + " after " +
                               std::to_string(sent) + " datagrams");
    }
    ++sent;
  }
  std::printf("sent %llu datagrams to %s:%u\n",
              static_cast<unsigned long long>(sent), host.c_str(), port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Foveated streaming simulator and gaze analytics toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Config file (key=value; command-line flags win)");
  app.set_version_flag("--version", "foveastream 0.1.0");

  // ---- offsetmap ----------------------------------------------------------
  auto* offsetmap =
      app.add_subcommand("offsetmap", "Write a per-macroblock QP-offset map");
  GridFlags om_grid;
  FovFlags om_fov;
  RateFlags om_rate;
  double om_gaze_x = 0.0, om_gaze_y = 0.0;
  std::string om_out, om_sweep;
  add_grid_flags(offsetmap, om_grid);
  add_fov_flags(offsetmap, om_fov);
  add_rate_flags(offsetmap, om_rate);
  auto* om_gx_opt = offsetmap->add_option(
      "--gaze-x", om_gaze_x, "Gaze x in pixels (default: frame center)");
  auto* om_gy_opt = offsetmap->add_option(
      "--gaze-y", om_gaze_y, "Gaze y in pixels (default: frame center)");
  offsetmap
      ->add_option("--out", om_out,
                   "Output prefix (<out>.csv and <out>.pgm); with --sweep, the "
                   "CSV file itself")
      ->required();
  offsetmap->add_option("--sweep", om_sweep,
                        "Savings sweep over qo_max=v1,v2,... or w_frac=...");
  offsetmap->callback([&] {
    const fs::GridSpec grid = om_grid.make();
    const fs::PixelPoint gaze = fs::clamp_to_frame(
        grid,
        fs::PixelPoint{om_gx_opt->count() != 0u ? om_gaze_x
                                                : grid.frame_width_px() / 2.0,
                       om_gy_opt->count() != 0u ? om_gaze_y
                                                : grid.frame_height_px() / 2.0});
    if (!om_sweep.empty()) {
      const auto params_list = parse_sweep(om_sweep, om_fov, grid);
      const auto rows =
          fs::savings_sweep(grid, params_list, gaze, om_rate.make());
      auto out = open_output(om_out);
      fs::write_sweep_csv(rows, out);
      return;
    }
    const fs::FoveationParams params = om_fov.make(grid);
    const fs::OffsetMap map = fs::compute_offset_map(grid, params, gaze);
    auto csv = open_output(om_out + ".csv");
    fs::write_offset_csv(map, csv);
    auto pgm = open_output(om_out + ".pgm");
    fs::write_offset_pgm(map, params.qo_max, pgm);
    std::printf("mean_offset %.17g\n", map.mean());
  });

  // ---- simulate -----------------------------------------------------------
  auto* simulate =
      app.add_subcommand("simulate", "Replay a gaze trace through the "
                                     "channel and foveated encoder");
  GridFlags sim_grid;
  FovFlags sim_fov;
  RateFlags sim_rate;
  std::string sim_trace, sim_out, sim_summary, sim_csv;
  double sim_fps = 40.0;
  double sim_duration = 0.0;  // 0 = cover the whole trace
  double sim_latency = 0.0, sim_jitter = 0.0, sim_loss = 0.0;
  bool sim_filter = false;
  double sim_alpha = 0.4, sim_saccade = 700.0;
  std::uint64_t sim_seed = 0;
  add_grid_flags(simulate, sim_grid);
  add_fov_flags(simulate, sim_fov);
  add_rate_flags(simulate, sim_rate);
  simulate->add_option("--trace", sim_trace, "Input gaze trace CSV")->required();
  simulate->add_option("--fps", sim_fps, "Encode frame rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--duration", sim_duration,
                       "Simulated seconds (default: trace span)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--latency-ms", sim_latency, "Channel base latency")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--jitter-ms", sim_jitter, "Channel jitter half-width")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--loss", sim_loss, "Channel loss probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_flag("--filter", sim_filter, "Light-filter the trace first");
  simulate->add_option("--alpha", sim_alpha, "Light filter EMA weight")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  simulate
      ->add_option("--saccade-speed", sim_saccade,
                   "Light filter saccade threshold, px/s")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "Run seed")
      ->capture_default_str()
      ->envname("FOVEASTREAM_SEED");
  simulate->add_option("--out", sim_out, "Per-frame records, JSON lines")
      ->required();
  simulate->add_option("--summary", sim_summary,
                       "Summary JSON path (default: stdout)");
  simulate->add_option("--csv", sim_csv, "Also write records as CSV");
  simulate->callback([&] {
    const fs::GridSpec grid = sim_grid.make();
    const fs::GazeTrace trace = load_trace_or_fail(sim_trace, grid);
    fs::SessionConfig config;
    config.grid = grid;
    config.fov = sim_fov.make(grid);
    config.rate = sim_rate.make();
    config.channel =
        fs::ChannelSpec{sim_latency, sim_jitter, sim_loss, sim_seed};
    if (sim_filter) {
      config.filter = fs::FilterParams{sim_alpha, sim_saccade};
    }
    config.fps = sim_fps;
    if (sim_duration > 0.0) {
      config.duration_s = sim_duration;
    }
    config.seed = sim_seed;

    const std::vector<fs::FrameRecord> records = fs::run_session(trace, config);
    auto out = open_output(sim_out);
    fs::write_records_jsonl(records, out);
    if (!sim_csv.empty()) {
      auto csv = open_output(sim_csv);
      fs::write_records_csv(records, csv);
    }
    const fs::SessionSummary summary = fs::session_summary(records);
    if (sim_summary.empty()) {
      fs::write_summary_json(summary, std::cout);
    } else {
      auto sum = open_output(sim_summary);
      fs::write_summary_json(summary, sum);
    }
  });

  // ---- analyze ------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "Gaze trace analytics");
  analyze->require_subcommand(1);

  auto* moments = analyze->add_subcommand("moments", "Gaze moment segmentation");
  GridFlags mo_grid;
  std::string mo_trace, mo_out;
  double mo_radius = 120.0;
  add_grid_flags(moments, mo_grid);
  moments->add_option("--trace", mo_trace, "Input gaze trace CSV")->required();
  moments->add_option("--radius", mo_radius, "Moment region radius in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  moments->add_option("--out", mo_out, "Moments CSV path")->required();
  moments->callback([&] {
    const fs::GazeTrace trace = load_trace_or_fail(mo_trace, mo_grid.make());
    const auto result = fs::gaze_moments(trace, mo_radius);
    auto out = open_output(mo_out);
    fs::write_moments_csv(result, out);
    std::printf("moments %zu\n", result.size());
  });

  auto* rate = analyze->add_subcommand("rate", "Gaze change rate, px/s");
  GridFlags ra_grid;
  std::string ra_trace, ra_out;
  add_grid_flags(rate, ra_grid);
  rate->add_option("--trace", ra_trace, "Input gaze trace CSV")->required();
  rate->add_option("--out", ra_out, "Output path, one value per line")
      ->required();
  rate->callback([&] {
    const fs::GazeTrace trace = load_trace_or_fail(ra_trace, ra_grid.make());
    const auto rates = fs::change_rate(trace);
    auto out = open_output(ra_out);
    fs::write_values_lines(rates, out);
    std::printf("pairs %zu\n", rates.size());
  });

  auto* heatmap = analyze->add_subcommand("heatmap", "Gaze KDE heatmap");
  GridFlags hm_grid;
  std::string hm_trace, hm_out;
  double hm_bin = 16.0;
  double hm_bandwidth = 0.0;  // 0 = width/64
  add_grid_flags(heatmap, hm_grid);
  heatmap->add_option("--trace", hm_trace, "Input gaze trace CSV")->required();
  heatmap->add_option("--bin-size", hm_bin, "Bin edge length in pixels")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  heatmap
      ->add_option("--bandwidth", hm_bandwidth,
                   "Gaussian kernel bandwidth in pixels (default: width/64)")
      ->check(CLI::PositiveNumber);
  heatmap->add_option("--out", hm_out, "Output prefix (<out>.csv, <out>.pgm)")
      ->required();
  heatmap->callback([&] {
    const fs::GridSpec grid = hm_grid.make();
    const fs::GazeTrace trace = load_trace_or_fail(hm_trace, grid);
    const double bandwidth =
        hm_bandwidth > 0.0 ? hm_bandwidth : grid.frame_width_px() / 64.0;
    const fs::HeatmapGrid map = fs::heatmap(trace, grid, hm_bin, bandwidth);
    auto csv = open_output(hm_out + ".csv");
    fs::write_heatmap_csv(map, csv);
    auto pgm = open_output(hm_out + ".pgm");
    fs::write_heatmap_pgm(map, pgm);
  });

  auto* ecdf_cmd = analyze->add_subcommand("ecdf", "Empirical CDF of a value list");
  std::string ec_values, ec_out;
  ecdf_cmd->add_option("--values", ec_values, "Input file, one value per line")
      ->required();
  ecdf_cmd->add_option("--out", ec_out, "ECDF CSV path")->required();
  ecdf_cmd->callback([&] {
    const auto values = fs::load_values_lines(ec_values);
    const auto points = fs::ecdf(values);
    auto out = open_output(ec_out);
    fs::write_ecdf_csv(points, out);
  });

  // ---- synth --------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a synthetic gaze trace");
  GridFlags sy_grid;
  std::string sy_kind = "random_walk", sy_out;
  double sy_duration = 10.0, sy_rate = 90.0;
  std::uint64_t sy_seed = 0;
  add_grid_flags(synth, sy_grid);
  synth
      ->add_option("--kind", sy_kind, "fixate, step, spiral, or random_walk")
      ->capture_default_str()
      ->check(CLI::IsMember({"fixate", "step", "spiral", "random_walk"}));
  synth->add_option("--duration", sy_duration, "Trace length in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--rate", sy_rate, "Sampling rate in Hz")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", sy_seed, "Generator seed")
      ->capture_default_str()
      ->envname("FOVEASTREAM_SEED");
  synth->add_option("--out", sy_out, "Trace CSV path")->required();
  synth->callback([&] {
    const fs::GridSpec grid = sy_grid.make();
    const fs::GazeTrace trace = fs::generate_synthetic_trace(
        fs::trace_kind_from_string(sy_kind), sy_duration, sy_rate, sy_seed,
        grid);
    auto out = open_output(sy_out);
    fs::save_trace(trace, out);
    std::printf("samples %zu\n", trace.samples.size());
  });

  // ---- send / serve -------------------------------------------------------
  auto* send = app.add_subcommand("send", "Stream a trace as UDP gaze datagrams");
  GridFlags se_grid;
  std::string se_host = "127.0.0.1", se_trace;
  std::uint16_t se_port = 9090;
  bool se_no_pace = false;
  add_grid_flags(send, se_grid);
  send->add_option("--host", se_host, "Receiver IPv4 address")
      ->capture_default_str();
  send->add_option("--port", se_port, "Receiver UDP port")->capture_default_str();
  send->add_option("--trace", se_trace, "Input gaze trace CSV")->required();
  send->add_flag("--no-pace", se_no_pace,
                 "Send back-to-back instead of following trace timestamps");
  send->callback([&] {
    const fs::GazeTrace trace = load_trace_or_fail(se_trace, se_grid.make());
    run_send(se_host, se_port, trace, !se_no_pace);
  });

  auto* serve = app.add_subcommand(
      "serve", "Receive UDP gaze datagrams into a latest-wins cell");
  GridFlags sv_grid;
  std::string sv_host = "127.0.0.1";
  std::uint16_t sv_port = 9090;
  std::uint64_t sv_count = 0;
  int sv_wait = 10000;
  add_grid_flags(serve, sv_grid);
  serve->add_option("--host", sv_host, "Bind IPv4 address")->capture_default_str();
  serve->add_option("--port", sv_port, "Bind UDP port")->capture_default_str();
  serve
      ->add_option("--count", sv_count,
                   "Exit after accepting this many messages (0 = run forever)")
      ->capture_default_str();
  serve
      ->add_option("--wait-ms", sv_wait,
                   "With --count: max wait for a datagram before giving up")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  int serve_status = 0;
  serve->callback([&] {
    serve_status = run_serve(sv_host, sv_port, sv_grid.make(), sv_count, sv_wait);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const fs::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return serve_status;
}
