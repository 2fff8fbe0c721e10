#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hyperpinn/io/checkpoint.hpp"
#include "hyperpinn/io/config.hpp"
#include "hyperpinn/io/drivers.hpp"
#include "hyperpinn/io/field_export.hpp"
#include "hyperpinn/io/text.hpp"
#include "hyperpinn/oracle/oracle.hpp"
#include "hyperpinn/oracle/verification.hpp"

namespace hp = hyperpinn;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct ConfigOptions {
  std::string file;
  std::string preset;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool quiet = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", file, "configuration file");
    cmd->add_option("-p,--preset", preset, "problem preset (problem.preset)");
    cmd->add_option("-s,--set", overrides, "override, section.key=value (repeatable)");
    cmd->add_option("--seed", seed, "network seed (network.seed)");
    cmd->add_flag("-q,--quiet", quiet, "no per-iteration log");
  }

  // Later sources win: defaults, then file, then --preset/--seed, then --set.
  hp::io::Config build(hp::io::Config base = {}) const {
    hp::io::Config c = std::move(base);
    if (!file.empty()) {
      const hp::io::Config loaded = hp::io::Config::load(file);
      for (const auto& [k, v] : loaded.entries()) c.set(k, v);
    }
    if (!preset.empty()) c.set("problem.preset", preset);
    if (seed) c.set("network.seed", std::to_string(*seed));
    for (const auto& o : overrides) c.apply_override(o);
    return c;
  }
};

hp::train::RowObserver progress(bool quiet) {
  if (quiet) return {};
  return [](const hp::train::HistoryRow& r) {
    if (r.iteration % 50 != 0) return;
    std::cerr << "stage " << r.stage << " iter " << r.iteration << " total "
              << hp::io::format_double(r.total) << " |g| " << r.grad_norm << '\n';
  };
}

void report_terms(const hp::train::HistoryRow& r) {
  for (int k = 0; k < hp::loss::kTermCount; ++k) {
    std::cout << "  " << hp::loss::term_name(k) << " = " << hp::io::format_double(r.terms[k])
              << " (weight " << r.weights[k] << ")\n";
  }
}

int cmd_solve(const ConfigOptions& opts) {
  const hp::io::RunConfig run = hp::io::resolve(opts.build());
  const hp::io::SolveReport rep = hp::io::solve(run, true, progress(opts.quiet));
  const auto& last = rep.result.history.rows.back();
  std::cout << "preset " << run.preset << ", config_hash "
            << hp::io::hex64(hp::io::config_hash(run)) << '\n';
  for (const auto& s : rep.result.stages) {
    std::cout << "stage " << s.stage << " (load " << s.load_fraction << "): "
              << hp::train::stop_reason_name(s.reason) << " after " << s.iterations
              << " iterations\n";
  }
  std::cout << "final total = " << hp::io::format_double(last.total) << '\n';
  report_terms(last);
  if (rep.l2_error) std::cout << "l2_error vs exact = " << *rep.l2_error << '\n';
  std::cout << "outputs in " << rep.directory.string() << '\n';
  return 0;
}

int cmd_export(const std::string& checkpoint, const std::string& out_dir,
               const std::vector<int>& grid) {
  const hp::io::Checkpoint ck = hp::io::read_checkpoint(checkpoint);
  hp::io::RunConfig run = ck.run;
  if (!grid.empty()) {
    if (grid.size() != 3) throw hp::ConfigError("--grid needs three counts");
    for (int k = 0; k < 3; ++k) run.export_grid[k] = grid[k];
  }
  const hp::bvp::ProblemSpec problem = hp::io::build_problem(run);
  const hp::net::FieldNetwork network = hp::io::build_network(run);
  const hp::ad::ParamVector phi{network.layout(), ck.values};
  if (phi.values.size() != network.layout().size()) {
    throw hp::ConfigError("checkpoint parameter count does not match its network");
  }
  const Eigen::Matrix3Xd X = hp::io::regular_grid(problem.domain.box, run.export_grid);
  const hp::loss::FieldSample s = hp::loss::sample_fields(problem, network, phi, X);
  const hp::io::ExportMetadata meta{hp::io::config_hash(run), run.seed, run.preset};
  const fs::path dir = out_dir.empty() ? fs::path(checkpoint).parent_path() : fs::path(out_dir);
  if (!dir.empty()) fs::create_directories(dir);
  hp::io::write_fields_csv(dir / "fields.csv", s, meta);
  hp::io::write_fields_vtk(dir / "fields.vtk", s, problem.domain.box, run.export_grid, meta);
  std::cout << "wrote " << X.cols() << " points to " << (dir / "fields.csv").string() << " and "
            << (dir / "fields.vtk").string() << '\n';
  return 0;
}

int cmd_check_gradients(std::uint64_t seed) {
  bool ok = true;
  for (const auto& r : hp::oracle::gradient_suites(seed)) {
    std::cout << (r.passed ? "ok   " : "FAIL ") << r.name << ": max rel. error " << r.max_error
              << " (threshold " << r.threshold << ")";
    if (!r.detail.empty()) std::cout << "; " << r.detail;
    std::cout << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitVerification;
}

hp::io::Config affine_base(const std::string& F) {
  hp::io::Config c;
  c.set("problem.preset", "affine");
  c.set("problem.affine_F", F);
  return c;
}

const std::string kShearF = "1,0.3,0,0,1,0,0,0,1";
const std::string kStretchF = "1.1,0,0,0,1,0,0,0,1";

int cmd_run_oracles(const ConfigOptions& opts, double tolerance) {
  bool ok = true;
  for (const auto& [name, F] : {std::pair{"shear_0.3", kShearF}, std::pair{"stretch_1.1", kStretchF}}) {
    hp::io::Config c = opts.build(affine_base(F));
    c.set("problem.affine_F", F);
    const hp::io::SolveReport rep = hp::io::solve(hp::io::resolve(c), false, progress(opts.quiet));
    const double err = *rep.l2_error;
    const bool pass = err <= tolerance;
    std::cout << (pass ? "ok   " : "FAIL ") << "affine " << name << ": l2_error " << err
              << " after " << rep.result.history.rows.back().iteration << " iterations (tolerance "
              << tolerance << ")\n";
    ok = ok && pass;
  }
  return ok ? 0 : kExitVerification;
}

int cmd_compare_masks(const ConfigOptions& opts, std::optional<double> max_l2) {
  const hp::io::RunConfig run = hp::io::resolve(opts.build(affine_base(kShearF)));
  const auto rows = hp::io::compare_masks(run);
  const std::string table = hp::io::format_mask_table(rows);
  const fs::path dir = hp::io::output_directory(run);
  fs::create_directories(dir);
  hp::io::write_file(dir / "mask_comparison.csv", table);
  std::cout << table << "table in " << (dir / "mask_comparison.csv").string() << '\n';
  if (max_l2) {
    for (const auto& r : rows) {
      if (!(r.l2_error <= *max_l2)) return kExitVerification;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-informed neural network solver for finite-strain hyperelasticity"};
  app.require_subcommand(1);

  ConfigOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "train a configured problem");
  solve_opts.attach(solve);

  std::string checkpoint;
  std::string out_dir;
  std::vector<int> grid;
  auto* exp = app.add_subcommand("export-fields", "sample a checkpoint on a regular grid");
  exp->add_option("checkpoint", checkpoint, "checkpoint file")->required();
  exp->add_option("-o,--out", out_dir, "output directory (default: next to the checkpoint)");
  exp->add_option("--grid", grid, "export grid counts, overrides output.export_grid")->expected(3);

  std::uint64_t fd_seed = 0;
  auto* grad = app.add_subcommand("check-gradients", "finite-difference verification suites");
  grad->add_option("--seed", fd_seed, "random seed");

  ConfigOptions oracle_opts;
  double oracle_tol = 1e-3;
  auto* orc = app.add_subcommand("run-oracles", "affine patch tests against the exact field");
  oracle_opts.attach(orc);
  orc->add_option("--tolerance", oracle_tol, "l2_error bound");

  ConfigOptions mask_opts;
  std::optional<double> max_l2;
  auto* masks = app.add_subcommand("compare-masks", "full / DEM / DCM comparison table");
  mask_opts.attach(masks);
  masks->add_option("--max-l2", max_l2, "exit 4 if any l2_error exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  hp::mat::set_near_inversion_hook([](double j, long where) {
    std::cerr << "warning: J = " << j << " near inversion at point " << where << '\n';
  });

  try {
    if (*solve) return cmd_solve(solve_opts);
    if (*exp) return cmd_export(checkpoint, out_dir, grid);
    if (*grad) return cmd_check_gradients(fd_seed);
    if (*orc) return cmd_run_oracles(oracle_opts, oracle_tol);
    if (*masks) return cmd_compare_masks(mask_opts, max_l2);
  } catch (const hp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hp::UnknownPreset& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
