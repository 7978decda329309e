#include "mhdv/cli.hpp"

#include "mhdv/config.hpp"
#include "mhdv/errors.hpp"
#include "mhdv/reports.hpp"
#include "mhdv/snapshot.hpp"
#include "mhdv/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace mhdv {
namespace {

std::string step_name(const char* prefix, std::int64_t step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06lld.snap", prefix, static_cast<long long>(step));
  return buf;
}

RunConfig load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
  auto config = load_config(path);
  for (const auto& s : sets) apply_override(config, s);
  return config;
}

/// Keep the header and every row up to and including time t.
std::string truncate_diagnostics(const fs::path& path, double t) {
  std::ifstream in(path);
  if (!in) return {};
  std::string line, kept;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header) {
      const double row_t = std::strtod(line.c_str(), nullptr);
      if (row_t > t) break;
    }
    kept += line + '\n';
    header = false;
  }
  return kept;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& sets,
            const std::string& resume_path, long max_steps, std::ostream& out) {
  const auto config = load_with_overrides(config_path, sets);
  const auto& params = config.params;
  std::optional<ResumePoint<double>> resume;
  if (!resume_path.empty()) {
    auto ckpt = load_checkpoint(resume_path);
    if (ckpt.params.n != params.n || ckpt.params.alpha != params.alpha || ckpt.params.mu != params.mu ||
        ckpt.params.nu != params.nu) {
      throw ValidationError("checkpoint " + resume_path + " does not match the configuration (n, alpha, mu, nu)");
    }
    resume = std::move(ckpt.point);
  }

  const fs::path dir = fs::path(config.output_dir) / ("run_" + config.tag);
  fs::create_directories(dir);
  write_file_atomic(dir / "config.txt", dump_config(config));

  const fs::path diag_path = dir / "diagnostics.csv";
  std::string existing;
  if (resume) existing = truncate_diagnostics(diag_path, resume->state.t);
  std::ofstream diag(diag_path, std::ios::trunc);
  if (!diag) throw IoError("cannot write " + diag_path.string());
  if (existing.empty()) {
    write_csv_header(diag);
  } else {
    diag << existing;
  }

  RunCallbacks<double> cb;
  std::optional<DiagRecord<double>> last;
  cb.on_record = [&](const DiagRecord<double>& r) {
    write_csv_row(diag, r);
    last = r;
  };
  cb.diag_interval = config.diag_interval;
  cb.hs_set = config.hs_monitor_set;
  cb.snapshot_interval = config.snapshot_interval.value_or(0);
  cb.checkpoint_interval = config.checkpoint_interval.value_or(0);
  cb.on_snapshot = [&](const SimState<double>& s) {
    save_snapshot(s, params, dir / step_name("snapshot", s.step_index));
  };
  std::int64_t last_checkpoint = -1;
  cb.on_checkpoint = [&](const ResumePoint<double>& p) {
    save_checkpoint(p, params, dir / step_name("checkpoint", p.state.step_index));
    last_checkpoint = p.state.step_index;
  };
  cb.max_steps = max_steps;

  const auto final_state = run<double>(params, cb, std::move(resume));
  diag.flush();
  if (!diag) throw IoError("write failed: " + diag_path.string());

  if (final_state.t < params.t_end) {
    if (last_checkpoint != final_state.step_index) {
      throw RuntimeAbort("stopped at step " + std::to_string(final_state.step_index) +
                         " without a checkpoint; set checkpoint_interval to a divisor of --max-steps");
    }
    out << "stopped at step " << final_state.step_index << ", t = " << format_double(final_state.t)
        << "; resume from " << (dir / step_name("checkpoint", final_state.step_index)).string() << "\n";
    return 0;
  }
  save_snapshot(final_state, params, dir / "final.snap");
  out << "finished: step " << final_state.step_index << ", t = " << format_double(final_state.t);
  if (last) {
    out << ", voigt_energy = " << format_double(last->voigt_energy)
        << ", energy_residual = " << format_double(last->energy_residual);
  }
  out << "\noutput: " << dir.string() << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& sets,
              const std::vector<double>& alphas, long sample_interval, bool refine_check, std::ostream& out) {
  const auto config = load_with_overrides(config_path, sets);
  SweepOptions opt;
  opt.sample_interval = sample_interval;
  opt.refine_check = refine_check;
  const auto report = alpha_sweep<double>(config.params, alphas, opt);
  const fs::path dir = fs::path(config.output_dir) / ("sweep_" + config.tag);
  write_sweep(report, dir);
  print_sweep_summary(report, out);
  out << "output: " << dir.string() << "\n";
  return 0;
}

int cmd_blowup(const std::string& config_path, const std::vector<std::string>& sets,
               const std::vector<double>& alphas, double t_star, long sample_interval, std::ostream& out) {
  const auto config = load_with_overrides(config_path, sets);
  BlowupOptions opt;
  opt.sample_interval = sample_interval;
  const auto report = blowup_scan<double>(config.params, alphas, t_star, opt);
  const fs::path dir = fs::path(config.output_dir) / ("blowup_" + config.tag);
  write_blowup(report, dir);
  print_blowup_summary(report, out);
  out << "output: " << dir.string() << "\n";
  return 0;
}

int cmd_diff(const std::string& a_path, const std::string& b_path, const std::string& norm,
             std::ostream& out) {
  const auto a = load_snapshot(a_path);
  const auto b = load_snapshot(b_path);
  if (a.params.n != b.params.n) {
    throw ValidationError("snapshots have different grids: n=" + std::to_string(a.params.n) +
                          " vs n=" + std::to_string(b.params.n));
  }
  // put b on a's grid object so the field arithmetic sees one grid
  const auto du = a.state.u - SpectralField<double>(a.state.u.grid_ptr(), b.state.u.coeffs());
  const auto db = a.state.b - SpectralField<double>(a.state.u.grid_ptr(), b.state.b.coeffs());
  const double s = norm == "h1" ? 1.0 : 0.0;
  out << format_double(std::sqrt(sobolev_norm_sq(du, s) + sobolev_norm_sq(db, s))) << "\n";
  return 0;
}

int cmd_spectrum(const std::string& path, std::ostream& out) {
  write_spectrum_csv(load_snapshot(path).state, out);
  return 0;
}

int cmd_verify(const std::string& level, std::ostream& out) {
  const auto checks = verify::run_checks(level == "full" ? verify::Level::full : verify::Level::fast);
  bool ok = true;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  out << (ok ? "all checks passed" : "some checks failed") << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral solver for the Voigt-regularized MHD equations on the periodic box", "mhdv"};
  app.require_subcommand(1);

  std::string config_path, resume_path, snap_a, snap_b, norm = "l2", level = "fast";
  std::vector<std::string> sets;
  std::vector<double> alphas;
  double t_star = 0;
  long max_steps = 0, sample_interval = 1;
  bool refine_check = false;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "override a configuration entry, key=value")->take_all();
  };

  auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
  add_config(run_cmd);
  run_cmd->add_option("--resume", resume_path, "checkpoint to continue from");
  run_cmd->add_option("--max-steps", max_steps, "stop after this many steps")->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep-alpha", "alpha -> 0 convergence study");
  add_config(sweep_cmd);
  sweep_cmd->add_option("--alphas", alphas, "strictly decreasing list")->required()->delimiter(',');
  sweep_cmd->add_option("--sample-interval", sample_interval, "steps between samples")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--refine-check", refine_check, "also rerun the reference on a 2n grid");

  auto* blowup_cmd = app.add_subcommand("blowup-scan", "alpha^2 ||u||^2 scaling scan");
  add_config(blowup_cmd);
  blowup_cmd->add_option("--alphas", alphas, "strictly decreasing list")->required()->delimiter(',');
  blowup_cmd->add_option("--t-star", t_star, "final time")->required();
  blowup_cmd->add_option("--sample-interval", sample_interval, "steps between samples")
      ->check(CLI::PositiveNumber);

  auto* diff_cmd = app.add_subcommand("diff", "norm of the difference of two snapshots");
  diff_cmd->add_option("a", snap_a, "first snapshot")->required();
  diff_cmd->add_option("b", snap_b, "second snapshot")->required();
  diff_cmd->add_option("--norm", norm, "l2 or h1")->check(CLI::IsMember({"l2", "h1"}));

  auto* spectrum_cmd = app.add_subcommand("spectrum", "shell-summed energy spectrum as CSV");
  spectrum_cmd->add_option("snapshot", snap_a, "snapshot file")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run the identity and oracle checks");
  verify_cmd->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, sets, resume_path, max_steps, out);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, sets, alphas, sample_interval, refine_check, out);
    if (blowup_cmd->parsed()) return cmd_blowup(config_path, sets, alphas, t_star, sample_interval, out);
    if (diff_cmd->parsed()) return cmd_diff(snap_a, snap_b, norm, out);
    if (spectrum_cmd->parsed()) return cmd_spectrum(snap_a, out);
    if (verify_cmd->parsed()) return cmd_verify(level, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const RuntimeAbort& e) {
    err << "aborted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "aborted: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace mhdv
