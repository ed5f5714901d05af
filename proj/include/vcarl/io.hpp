#pragma once

#include "vcarl/tiles.hpp"

#include <iosfwd>
#include <string>

namespace vcarl {

// CSV with columns x, re[, im]; an optional non-numeric header line is skipped.
// The x column must be uniformly spaced (relative tolerance 1e-9).
SampledSignal parse_signal_csv(std::istream& in, const std::string& name = "input");
SampledSignal read_signal_csv(const std::string& path);

void write_signal_csv(std::ostream& os, const SampledSignal& f);
void write_signal_csv(const std::string& path, const SampledSignal& f);
// x,value with value = real part
void write_real_csv(std::ostream& os, const SampledSignal& f);
// u,t,eta,value for every tile
void write_field_csv(std::ostream& os, const TileField& F);

void write_text(const std::string& path, const std::string& text);
std::string format_double(double v);

} // namespace vcarl
