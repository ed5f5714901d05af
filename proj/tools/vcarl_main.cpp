#include "vcarl/commands.hpp"
#include "vcarl/error.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

double parse_cut(const std::string& s)
{
    if (s == "inf" || s == "+inf") return INFINITY;
    if (s == "-inf" || s == "ninf") return -INFINITY;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    vcarl::require(used == s.size() && !s.empty(), vcarl::ErrorKind::config, "not a frequency: '" + s + "'");
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"r-variation Carleson sparse-bound experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--seed", seed, "override the configured seed");
    app.add_option("--out-dir", out_dir, "directory for output tables");
    app.add_option("--threads", threads, "worker threads (the build is single threaded)")->check(CLI::PositiveNumber);

    std::string f_path, g_path, xi_lo, xi_hi;
    auto* carleson = app.add_subcommand("carleson", "C_r f at every sample");
    carleson->add_option("signal", f_path, "signal CSV")->required();
    auto* transform = app.add_subcommand("transform", "wave packet embedding of f");
    transform->add_option("signal", f_path, "signal CSV")->required();
    auto* embed_a = app.add_subcommand("embed-a", "truncated embedding of g linearized by f");
    embed_a->add_option("f", f_path, "signal CSV")->required();
    embed_a->add_option("g", g_path, "signal CSV")->required();
    auto* sparse = app.add_subcommand("sparse", "sparse collection and verification");
    sparse->add_option("f", f_path, "signal CSV")->required();
    sparse->add_option("g", g_path, "signal CSV")->required();
    auto* verify = app.add_subcommand("verify", "domination constant study on a random corpus");
    auto* reconstruct = app.add_subcommand("reconstruct", "reconstructed truncation multiplier");
    reconstruct->add_option("xi_minus", xi_lo, "left cut, may be -inf")->required();
    reconstruct->add_option("xi_plus", xi_hi, "right cut, may be inf")->required();
    auto* weights = app.add_subcommand("weights", "weighted bound experiment");
    auto* defaults = app.add_subcommand("defaults", "print the canonical configuration");

    // "-inf" would otherwise be read as a flag.
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.push_back(std::string(argv[i]) == "-inf" ? "ninf" : argv[i]);
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (defaults->parsed()) {
            std::cout << vcarl::cmd_defaults();
            return 0;
        }
        vcarl::CommandContext ctx;
        if (!config_path.empty()) ctx.cfg = vcarl::RunConfig::load(config_path);
        if (seed) ctx.cfg.seed = *seed;
        ctx.cfg.validate();
        ctx.out_dir = out_dir;
        ctx.threads = threads;

        vcarl::Json result;
        if (carleson->parsed()) result = vcarl::cmd_carleson(ctx, f_path);
        else if (transform->parsed()) result = vcarl::cmd_transform(ctx, f_path);
        else if (embed_a->parsed()) result = vcarl::cmd_embed_a(ctx, f_path, g_path);
        else if (sparse->parsed()) result = vcarl::cmd_sparse(ctx, f_path, g_path);
        else if (verify->parsed()) result = vcarl::cmd_verify(ctx);
        else if (reconstruct->parsed()) result = vcarl::cmd_reconstruct(ctx, parse_cut(xi_lo), parse_cut(xi_hi));
        else if (weights->parsed()) result = vcarl::cmd_weights(ctx);

        std::cout << vcarl::dump_json(result);
        if (result.contains("pass") && !result["pass"].get<bool>()) {
            std::cerr << "assertion failure: command did not pass its checks\n";
            return 4;
        }
        return 0;
    } catch (const vcarl::Error& e) {
        std::cerr << vcarl::error_kind_name(e.kind()) << " error: " << e.what() << "\n";
        return vcarl::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }
}
