#include "vcarl/config.hpp"

#include "vcarl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace vcarl {

namespace {

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    std::string s = trim(v);
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    // allow a/b fractions such as 1/16
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return to_double(key, s.substr(0, slash)) / to_double(key, s.substr(slash + 1));
    double out = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
        fail(ErrorKind::config, "config key '" + key + "': not a number: '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& key, const std::string& v)
{
    std::string s = trim(v);
    unsigned long long out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
        fail(ErrorKind::config, "config key '" + key + "': not a nonnegative integer: '" + v + "'");
    return static_cast<std::size_t>(out);
}

bool to_bool(const std::string& key, const std::string& v)
{
    std::string s = trim(v);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    fail(ErrorKind::config, "config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
    require(!out.empty(), ErrorKind::config, "config key '" + key + "': empty list");
    return out;
}

std::string fmt(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_double(v);
}

} // namespace

RunConfig RunConfig::parse(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::config, "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        require(!key.empty(), ErrorKind::config, "config line " + std::to_string(lineno) + ": empty key");
        require(kv.emplace(key, val).second, ErrorKind::config, "config key '" + key + "' given twice");
    }

    RunConfig c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto D = [](double& x) -> Setter { return [&x](const std::string& k, const std::string& v) { x = to_double(k, v); }; };
    auto Z = [](std::size_t& x) -> Setter { return [&x](const std::string& k, const std::string& v) { x = to_count(k, v); }; };
    TentGeometry geo;
    std::map<std::string, Setter> setters{
        {"grid.n", Z(c.n)},
        {"grid.pad", Z(c.pad)},
        {"band.omega", D(c.omega)},
        {"freq.M", Z(c.M)},
        {"exponent.r", D(c.r)},
        {"exponent.p", D(c.p)},
        {"exponent.q", D(c.q)},
        {"exponent.t", D(c.t)},
        {"exponent.tau", D(c.tau)},
        {"wavepacket.b", D(c.packet.b)},
        {"wavepacket.d", D(c.packet.d)},
        {"wavepacket.eps", D(c.packet.eps)},
        {"wavepacket.d_prime", D(c.packet.d_prime)},
        {"wavepacket.d_doubleprime", D(c.packet.d_doubleprime)},
        {"wavepacket.core", D(c.packet.core)},
        {"tent.theta_lo", D(geo.alpha_lo)},
        {"tent.theta_hi", D(geo.alpha_hi)},
        {"tent.theta_o_lo", D(geo.beta_lo)},
        {"tent.theta_o_hi", D(geo.beta_hi)},
        {"tile.c_eta", D(c.tiles.c_eta)},
        {"tile.u_per_node", Z(c.tiles.u_per_length)},
        {"tile.scales_per_node", Z(c.tiles.max_scales)},
        {"recon.c_eta", D(c.recon_c_eta)},
        {"recon.scale_ratio", D(c.recon_ratio)},
        {"recon.t_max", D(c.recon_t_max)},
        {"recon.points", Z(c.recon_points)},
        {"sparse.c", D(c.sparse_c)},
        {"sparse.max_halvings", Z(c.sparse_max_halvings)},
        {"sparse.generation_cap", Z(c.generation_cap)},
        {"sparse.embedding_K", D(c.embedding_K)},
        {"sparse.embedding_sets", [&c](const std::string& k, const std::string& v) { c.embedding_sets = to_bool(k, v); }},
        {"sparse.epsilon", D(c.epsilon)},
        {"outer.levels", Z(c.outer_levels)},
        {"outer.refine", Z(c.outer_refine)},
        {"weights.a", [&c](const std::string& k, const std::string& v) { c.weights_a = to_list(k, v); }},
        {"weights.delta", D(c.weights_delta)},
        {"weights.floor", D(c.weights_floor)},
        {"corpus.size", Z(c.corpus_size)},
        {"seed", [&c](const std::string& k, const std::string& v) { c.seed = to_count(k, v); }},
    };
    // tent keys default to the b-derived geometry, so read b first
    geo = TentGeometry::defaults(c.packet);
    if (auto it = kv.find("wavepacket.b"); it != kv.end()) {
        setters.at("wavepacket.b")(it->first, it->second);
        geo = TentGeometry::defaults(c.packet);
    }
    for (const auto& [k, v] : kv) {
        auto it = setters.find(k);
        require(it != setters.end(), ErrorKind::config, "unknown config key '" + k + "'");
        it->second(k, v);
    }
    c.geometry = geo;
    return c;
}

RunConfig RunConfig::load(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::config, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void RunConfig::validate() const
{
    require(n >= 16, ErrorKind::config, "grid.n must be at least 16");
    require(pad >= 1, ErrorKind::config, "grid.pad must be at least 1");
    require(omega > 0.0 && std::isfinite(omega), ErrorKind::config, "band.omega must be positive");
    require(M >= 2, ErrorKind::config, "freq.M must be at least 2");
    check_variation_exponent(r);
    require(p >= 1.0, ErrorKind::exponent, "exponent.p must be at least 1");
    require(q > 0.0, ErrorKind::exponent, "exponent.q must be positive");
    require(t > 1.0, ErrorKind::exponent, "exponent.t must exceed 1");
    require(tau > 1.0, ErrorKind::exponent, "exponent.tau must exceed 1");
    packet.validate();
    geometry.validate(packet);
    require(tiles.c_eta > 0.0 && tiles.max_scales >= 1, ErrorKind::config, "tile settings invalid");
    require(recon_c_eta > 0.0 && recon_ratio > 0.0 && recon_ratio < 1.0 && recon_t_max > 0.0 && recon_points >= 2,
            ErrorKind::config, "reconstruction settings invalid");
    require(sparse_c > 0.0 && sparse_c < 1.0, ErrorKind::config, "sparse.c must lie in (0,1)");
    require(sparse_max_halvings >= 1 && generation_cap >= 1, ErrorKind::config, "sparse iteration caps invalid");
    require(embedding_K > 0.0, ErrorKind::config, "sparse.embedding_K must be positive");
    require(epsilon >= 0.0, ErrorKind::config, "sparse.epsilon must be nonnegative");
    require(outer_levels >= 2, ErrorKind::config, "outer.levels must be at least 2");
    require(weights_delta > 0.0 && weights_floor > 0.0, ErrorKind::config, "weight settings invalid");
    require(corpus_size >= 1, ErrorKind::config, "corpus.size must be at least 1");
}

SparseConfig RunConfig::sparse_config() const
{
    SparseConfig s;
    s.packet = packet;
    s.geometry = geometry;
    s.grid = tiles;
    s.norm.levels = outer_levels;
    s.norm.refine = outer_refine;
    s.p = p;
    s.tau = tau;
    s.sigma = sigma();
    s.c_initial = sparse_c;
    s.max_halvings = sparse_max_halvings;
    s.generation_cap = generation_cap;
    s.embedding_K = embedding_K;
    s.embedding_sets = embedding_sets;
    return s;
}

std::string RunConfig::to_text() const
{
    std::ostringstream o;
    auto line = [&](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
    o << "# vcarl run configuration\n\n";
    line("grid.n", std::to_string(n));
    line("grid.pad", std::to_string(pad));
    line("band.omega", fmt(omega));
    line("freq.M", std::to_string(M));
    o << "\n";
    line("exponent.r", fmt(r));
    line("exponent.p", fmt(p));
    line("exponent.q", fmt(q));
    line("exponent.t", fmt(t));
    line("exponent.tau", fmt(tau));
    o << "\n";
    line("wavepacket.b", fmt(packet.b));
    line("wavepacket.d", fmt(packet.d));
    line("wavepacket.eps", fmt(packet.eps));
    line("wavepacket.d_prime", fmt(packet.d_prime));
    line("wavepacket.d_doubleprime", fmt(packet.d_doubleprime));
    line("wavepacket.core", fmt(packet.core));
    o << "\n";
    line("tent.theta_lo", fmt(geometry.alpha_lo));
    line("tent.theta_hi", fmt(geometry.alpha_hi));
    line("tent.theta_o_lo", fmt(geometry.beta_lo));
    line("tent.theta_o_hi", fmt(geometry.beta_hi));
    o << "\n";
    line("tile.c_eta", fmt(tiles.c_eta));
    line("tile.u_per_node", std::to_string(tiles.u_per_length));
    line("tile.scales_per_node", std::to_string(tiles.max_scales));
    o << "\n";
    line("recon.c_eta", fmt(recon_c_eta));
    line("recon.scale_ratio", fmt(recon_ratio));
    line("recon.t_max", fmt(recon_t_max));
    line("recon.points", std::to_string(recon_points));
    o << "\n";
    line("sparse.c", fmt(sparse_c));
    line("sparse.max_halvings", std::to_string(sparse_max_halvings));
    line("sparse.generation_cap", std::to_string(generation_cap));
    line("sparse.embedding_K", fmt(embedding_K));
    line("sparse.embedding_sets", embedding_sets ? "true" : "false");
    line("sparse.epsilon", fmt(epsilon));
    o << "\n";
    line("outer.levels", std::to_string(outer_levels));
    line("outer.refine", std::to_string(outer_refine));
    o << "\n";
    std::string a;
    for (std::size_t i = 0; i < weights_a.size(); ++i) a += (i ? ", " : "") + fmt(weights_a[i]);
    line("weights.a", a);
    line("weights.delta", fmt(weights_delta));
    line("weights.floor", fmt(weights_floor));
    o << "\n";
    line("corpus.size", std::to_string(corpus_size));
    line("seed", std::to_string(seed));
    return o.str();
}

std::string default_config_text() { return RunConfig{}.to_text(); }

} // namespace vcarl
