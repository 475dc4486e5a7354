#pragma once

#include "caged/bloch.hpp"
#include "caged/caging.hpp"
#include "caged/gauge.hpp"
#include "caged/spectral.hpp"

#include <iosfwd>
#include <string>

namespace caged {

/// Flux literal: decimal ("0.25"), or a multiple of pi ("pi", "-pi/2", "2pi/3", "2*pi/3").
double parse_flux(const std::string& text);

/// Shortest text that reads back as the same double, never more than 17 digits.
std::string format_double(double v);

enum class Format { csv, json };
Format parse_format(const std::string& text);

void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);
void write_ccam(std::ostream& os, const Ccam& m);
Ccam read_ccam(std::istream& is);

void write_spectrum(std::ostream& os, const Spectrum& s, Format f = Format::csv);
void write_bands(std::ostream& os, const BandSweep& s, int dimensionality, Format f = Format::csv);
void write_dos(std::ostream& os, const DosMap& d, Format f = Format::csv);
void write_cls_report(std::ostream& os, const ClsReport& r);

} // namespace caged
