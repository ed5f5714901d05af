#pragma once

#include "vcarl/config.hpp"

#include "json.hpp"

#include <string>

namespace vcarl {

using Json = nlohmann::json;

struct CommandContext {
    RunConfig cfg;
    std::string out_dir = ".";
    unsigned threads = 1;
};

// Every command writes its tables into out_dir, writes <command>.json with the
// summary it returns, and sets "pass" when the command checks an assertion.
Json cmd_carleson(const CommandContext& ctx, const std::string& signal_path);
Json cmd_transform(const CommandContext& ctx, const std::string& signal_path);
Json cmd_embed_a(const CommandContext& ctx, const std::string& f_path, const std::string& g_path);
Json cmd_sparse(const CommandContext& ctx, const std::string& f_path, const std::string& g_path);
Json cmd_verify(const CommandContext& ctx);
Json cmd_reconstruct(const CommandContext& ctx, double xi_minus, double xi_plus);
Json cmd_weights(const CommandContext& ctx);
std::string cmd_defaults();

// Building blocks shared with the tests.
Json sparse_json(const SparseResult& res, const DominationReport& dom);
std::string dump_json(const Json& j);

struct DominationStudy {
    double base = 0.0;    // max ratio at (n, M)
    double refined = 0.0; // at (2n, M)
    double doubled = 0.0; // at (n, 2M)
    bool certified = true;
    double refine_change() const;
    double m_change() const;
};

DominationStudy domination_study(const RunConfig& cfg, std::size_t pairs);

} // namespace vcarl
