#include "swipt/cli/app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "swipt/baselines.hpp"
#include "swipt/errors.hpp"

namespace swipt::cli {

namespace {

std::string fmt(double v) { return format_double(v); }

void write_file(const std::filesystem::path& path, const std::string& text,
                std::vector<std::filesystem::path>& written) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot write " + path.string());
  f << text;
  written.push_back(path);
}

ChannelPair channels_for(const RunConfig& rc, const SystemConfig& cfg) {
  return generate_channels(cfg, rc.distIdM, rc.distEhM, rc.channelSeed, rc.pathlossExponent);
}

std::string solve_csv(const RunConfig& rc, const SystemConfig& cfg, const ChannelPair& ch,
                      const alt::SolveReport& rep, const SystemConfig& solved) {
  std::ostringstream os;
  const auto mr = mmse_and_rate(solved, ch.H, rep.best.precoder);
  os << "mse,rate_bits,target_energy_uW,achieved_energy_uW,max_energy_uW,lambda_bar,mu_bar,"
        "gamma,best_start,endpoint_bypass\n";
  os << fmt(mr.mse) << ',' << fmt(mr.rateBits) << ',' << fmt(energy_to_microwatts(rc, cfg.targetEnergy))
     << ',' << fmt(energy_to_microwatts(rc, rep.energy)) << ','
     << fmt(energy_to_microwatts(rc, max_energy(cfg, ch.G))) << ',' << fmt(rep.dual.lambdaBar)
     << ',' << fmt(rep.dual.muBar) << ',' << fmt(rep.best.scale) << ',' << rep.bestStart << ','
     << (rep.endpointBypass ? 1 : 0) << '\n';
  return os.str();
}

std::string precoder_csv(const CMatrix& F) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (Eigen::Index j = 0; j < F.cols(); ++j) {
    for (Eigen::Index i = 0; i < F.rows(); ++i) {
      os << i << ',' << j << ',' << fmt(F(i, j).real()) << ',' << fmt(F(i, j).imag()) << '\n';
    }
  }
  return os.str();
}

}  // namespace

void write_region_csv(std::ostream& os, const RunConfig& rc, const exp::RegionCurve& curve) {
  os << "target_energy_uW,achieved_energy_uW,metric\n";
  for (const auto& p : curve.points) {
    os << fmt(energy_to_microwatts(rc, p.targetEnergy)) << ','
       << fmt(energy_to_microwatts(rc, p.achievedEnergy)) << ',' << fmt(p.metric) << '\n';
  }
}

void write_convergence_csv(std::ostream& os, const std::vector<exp::TraceRow>& rows) {
  os << "start,iter,mse,rate_bits\n";
  for (const auto& r : rows) {
    os << r.start << ',' << r.iter << ',' << fmt(r.mse) << ',' << fmt(r.rateBits) << '\n';
  }
}

void write_ber_csv(std::ostream& os, const exp::BerResult& r) {
  os << "snr_dB,scheme,bit_errors,bits_total,ber\n";
  for (std::size_t k = 0; k < r.snrGridDb.size(); ++k) {
    for (std::size_t s = 0; s < r.schemes.size(); ++s) {
      os << fmt(r.snrGridDb[k]) << ',' << exp::to_string(r.schemes[s]) << ','
         << r.bitErrors[s][k] << ',' << r.bitsTotal[s][k] << ',' << fmt(r.ber(s, k)) << '\n';
    }
  }
}

std::vector<std::filesystem::path> run_experiment(const RunConfig& rc,
                                                  const std::filesystem::path& outDir,
                                                  int workers) {
  std::filesystem::create_directories(outDir);
  std::vector<std::filesystem::path> written;
  write_file(outDir / "manifest.txt", manifest_text(rc), written);

  SystemConfig cfg = to_system_config(rc);
  auto curve_out = [&](const exp::RegionCurve& curve, const std::string& name) {
    std::ostringstream os;
    write_region_csv(os, rc, curve);
    write_file(outDir / name, os.str(), written);
  };

  if (rc.experiment == "solve") {
    const ChannelPair ch = channels_for(rc, cfg);
    if (!rc.targetEnergyUw) cfg.targetEnergy = rc.targetFraction * max_energy(cfg, ch.G);
    SystemConfig solved = cfg;
    solved.weights = alt::resolve_weights(cfg.nStreams, ch.H, weight_spec(rc));
    const auto rep = alt::solve(solved, ch, solve_options(rc, workers));
    write_file(outDir / "solve.csv", solve_csv(rc, cfg, ch, rep, solved), written);
    write_file(outDir / "precoder.csv", precoder_csv(rep.best.precoder), written);
  } else if (rc.experiment == "region-mse" || rc.experiment == "region-rate") {
    const ChannelPair ch = channels_for(rc, cfg);
    const bool mse = rc.experiment == "region-mse";
    const auto kind = mse ? exp::MetricKind::Mse : exp::MetricKind::Rate;
    const std::string name = mse ? "region_mse.csv" : "region_rate.csv";
    try {
      const auto curve = exp::sweep_region(cfg, ch, kind, rc.gridSize, solve_options(rc, workers));
      curve_out(curve, name);
      if (!mse) {
        exp::RegionCurve oracle = curve;
        oracle.points.pop_back();  // closed-form endpoint
        for (auto& p : oracle.points) {
          const auto o = baselines::rate_optimal_oracle(cfg, ch.H, ch.G, p.targetEnergy);
          p.metric = o.rateBits;
          p.achievedEnergy = o.energy;
        }
        curve_out(oracle, "region_rate_oracle.csv");
      }
    } catch (const exp::SweepAborted& e) {
      curve_out(e.partial(), name);
      throw;
    }
  } else if (rc.experiment == "converge") {
    const ChannelPair ch = channels_for(rc, cfg);
    if (!rc.targetEnergyUw) cfg.targetEnergy = rc.targetFraction * max_energy(cfg, ch.G);
    const auto table = exp::convergence_trace(cfg, ch, weight_spec(rc), rc.starts,
                                              rc.convergeIters, rc.seed, workers);
    std::ostringstream all;
    write_convergence_csv(all, table.rows);
    write_file(outDir / "convergence.csv", all.str(), written);
    std::ostringstream best;
    write_convergence_csv(best, table.best());
    write_file(outDir / "convergence_best.csv", best.str(), written);
  } else if (rc.experiment == "ber") {
    exp::BerOptions opt;
    opt.distId = rc.distIdM;
    opt.distEh = rc.distEhM;
    opt.pathlossExponent = rc.pathlossExponent;
    opt.targetFraction = rc.targetFraction;
    opt.solve = solve_options(rc, 1);
    opt.workers = workers;
    const int channels = rc.fullScale ? rc.berChannelsFull : rc.berChannels;
    const auto res = exp::ber_montecarlo(cfg, schemes(rc), channels, rc.berSymbols, rc.berSnrDb,
                                         rc.berSeed, opt);
    std::ostringstream os;
    write_ber_csv(os, res);
    write_file(outDir / "ber.csv", os.str(), written);
  } else {
    throw ConfigError("experiment", "unknown experiment '" + rc.experiment + "'");
  }
  return written;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted-MMSE transceiver design for MIMO SWIPT broadcast"};
  app.require_subcommand(1);
  std::string configPath;
  std::vector<std::string> overrides;
  std::string outDir = "out";
  int workers = 1;
  bool fullScale = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"run", "run the experiment named in the config"},
      {"solve", "solve one instance"},
      {"region-mse", "sweep the MSE-energy region boundary"},
      {"region-rate", "sweep the rate-energy region boundary"},
      {"converge", "record per-iteration convergence traces"},
      {"ber", "uncoded 4QAM BER Monte-Carlo"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", configPath, "flat key=value config file");
    sub->add_option("--set", overrides, "override one key (key=value)")->take_all();
    sub->add_option("--out", outDir, "output directory");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--full-scale", fullScale, "use ber_channels_full realizations");
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  RunConfig rc;
  try {
    if (!configPath.empty()) {
      std::ifstream f(configPath, std::ios::binary);
      if (!f) throw ConfigError("--config", "cannot read " + configPath);
      std::ostringstream text;
      text << f.rdbuf();
      rc = parse_config(text.str());
    }
    for (const auto& o : overrides) apply_override(rc, o);
    if (fullScale) rc.fullScale = true;
    for (std::size_t i = 1; i < subs.size(); ++i) {
      if (subs[i]->parsed()) rc.experiment = commands[i].first;
    }
    (void)weight_spec(rc);
    to_system_config(rc).validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  }

  try {
    for (const auto& p : run_experiment(rc, outDir, workers)) out << p.string() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace swipt::cli
