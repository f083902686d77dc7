#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <dgs/harness.hpp>

int main(int argc, char** argv) {
    CLI::App app{"batch-dynamic graph streaming harness"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "execute a workload and report");
    std::string workload_path, report_path, accounting = "idealized", oracle = "on";
    double phi = 0.5;
    uint64_t seed = 0;
    double epsilon = -1, alpha = -1, kappa = -1;
    int failure_budget = -1;
    run_cmd->add_option("--workload", workload_path, "workload file")->required();
    run_cmd->add_option("--phi", phi, "local memory exponent");
    run_cmd->add_option("--accounting", accounting, "idealized|strict")
        ->check(CLI::IsMember({"idealized", "strict"}));
    run_cmd->add_option("--seed", seed, "master seed");
    run_cmd->add_option("--epsilon", epsilon, "override workload eps");
    run_cmd->add_option("--alpha", alpha, "override workload alpha");
    run_cmd->add_option("--kappa", kappa, "override workload kappa");
    run_cmd->add_option("--oracle", oracle, "on|off")->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--report", report_path, "write JSON-lines report here");
    run_cmd->add_option("--failure-budget", failure_budget,
                        "allowed oracle failures (-1: auto)");

    auto* gen_cmd = app.add_subcommand("generate", "write a deterministic workload");
    std::string kind, out_path;
    dgs::GenParams params;
    gen_cmd->add_option("--kind", kind, "erdos-renyi-mixed|path-splitter|component-churn|"
                                        "matching-planted|weight-laddered")
        ->required();
    gen_cmd->add_option("--n", params.n, "vertex count")->required();
    gen_cmd->add_option("--batches", params.batches, "batch count");
    gen_cmd->add_option("--batch-size", params.batch_size, "updates per batch");
    gen_cmd->add_option("--seed", params.seed, "generator seed");
    gen_cmd->add_option("-o,--output", out_path, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed()) {
            dgs::generate(kind, params).save(out_path);
            std::cout << "wrote " << out_path << "\n";
            return 0;
        }
        auto wf = dgs::WorkloadFile::load(workload_path);
        dgs::RunConfig cfg;
        cfg.phi = phi;
        cfg.accounting =
            accounting == "strict" ? dgs::Accounting::strict : dgs::Accounting::idealized;
        cfg.seed = seed;
        if (epsilon > 0) cfg.epsilon = epsilon;
        if (alpha > 0) cfg.alpha = alpha;
        if (kappa > 0) cfg.kappa = kappa;
        cfg.oracle = oracle == "on";
        cfg.failure_budget = failure_budget;
        auto report = dgs::run(wf, cfg);
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            if (!out) throw dgs::HarnessError("cannot write report: " + report_path);
            out << report.json_lines();
        }
        std::cout << report.human_summary();
        return report.passed ? 0 : 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
}
