#include "vcarl/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace vcarl {

namespace {

bool parse_number(const std::string& s, double& out)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return false;
    const char* first = s.data() + a;
    const char* last = s.data() + b + 1;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

SampledSignal parse_signal_csv(std::istream& in, const std::string& name)
{
    std::vector<double> xs;
    std::vector<cplx> vs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cols = split(line);
        double x = 0.0, re = 0.0, im = 0.0;
        bool ok = cols.size() >= 2 && cols.size() <= 3 && parse_number(cols[0], x) && parse_number(cols[1], re) &&
                  (cols.size() < 3 || parse_number(cols[2], im));
        if (!ok) {
            require(xs.empty() && lineno == 1, ErrorKind::input,
                    name + ": malformed CSV at line " + std::to_string(lineno));
            continue; // header
        }
        require(std::isfinite(x) && std::isfinite(re) && std::isfinite(im), ErrorKind::input,
                name + ": non-finite value at line " + std::to_string(lineno));
        xs.push_back(x);
        vs.emplace_back(re, im);
    }
    require(xs.size() >= 2, ErrorKind::input, name + ": a signal needs at least two samples");
    double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
    require(dx > 0.0, ErrorKind::input, name + ": x must increase");
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double expect = xs.front() + dx * static_cast<double>(k);
        require(std::abs(xs[k] - expect) <= 1e-9 * dx + 1e-12 * std::abs(expect), ErrorKind::input,
                name + ": x is not uniformly spaced at row " + std::to_string(k + 1));
    }
    SampledSignal f;
    f.origin = xs.front();
    f.spacing = dx;
    f.samples = std::move(vs);
    return f;
}

SampledSignal read_signal_csv(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::input, "cannot read signal file '" + path + "'");
    return parse_signal_csv(in, path);
}

void write_signal_csv(std::ostream& os, const SampledSignal& f)
{
    os << "x,re,im\n";
    for (std::size_t k = 0; k < f.size(); ++k)
        os << format_double(f.x(k)) << ',' << format_double(f.samples[k].real()) << ','
           << format_double(f.samples[k].imag()) << '\n';
}

void write_signal_csv(const std::string& path, const SampledSignal& f)
{
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::input, "cannot write '" + path + "'");
    write_signal_csv(os, f);
}

void write_real_csv(std::ostream& os, const SampledSignal& f)
{
    os << "x,value\n";
    for (std::size_t k = 0; k < f.size(); ++k)
        os << format_double(f.x(k)) << ',' << format_double(f.samples[k].real()) << '\n';
}

void write_field_csv(std::ostream& os, const TileField& F)
{
    F.validate();
    const TileGrid& g = *F.grid;
    os << "u,t,eta,value\n";
    for (std::size_t k = 0; k < g.scales().size(); ++k)
        for (std::size_t j = 0; j < g.scales()[k].eta_count; ++j)
            for (std::size_t i = 0; i < g.u_count(); ++i) {
                Tile t = g.tile(k, j, i);
                os << format_double(t.u) << ',' << format_double(t.t) << ',' << format_double(t.eta) << ','
                   << format_double(F.values[g.index(k, j, i)]) << '\n';
            }
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::input, "cannot write '" + path + "'");
    os << text;
}

} // namespace vcarl
