#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "qthalf/config.hpp"
#include "qthalf/experiments.hpp"
#include "qthalf/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qthalf: numerical laboratory for a wall-bounded Q-tensor/velocity model"};

  std::string kind, config_path, out_dir;
  std::uint64_t seed = 0;
  app.add_option("kind", kind,
                 "experiment kind: invariants | resolvent-sweep | decay-fit | gn-check | "
                 "picard | simulate")
      ->required();
  app.add_option("--config", config_path, "configuration file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "override the configured random seed");
  auto* out_opt = app.add_option("--out", out_dir, "override the configured output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean, usage errors are config errors
  }

  try {
    qthalf::RunConfig cfg = qthalf::parse_config(config_path);
    if (!qthalf::valid_kind(kind)) {
      std::fprintf(stderr, "unknown experiment kind '%s'\n", kind.c_str());
      return 2;
    }
    cfg.kind = kind;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (out_opt->count() > 0) cfg.out = out_dir;

    const qthalf::Report rep = qthalf::run_experiment(cfg);
    const auto files = qthalf::emit_report(rep, cfg, cfg.out);

    for (const qthalf::MetricEntry& m : rep.metrics)
      std::printf("[%s] %s = %.6g  (%s %.6g)  [%s]\n", m.pass ? "PASS" : "FAIL", m.name.c_str(),
                  m.value, m.relation.c_str(), m.tolerance, m.anchor.c_str());
    for (const std::string& n : rep.notes) std::printf("note: %s\n", n.c_str());
    for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
    std::printf("%s\n", rep.pass() ? "ALL CHECKS PASSED" : "CHECKS FAILED");
    return rep.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
}
