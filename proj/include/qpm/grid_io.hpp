#pragma once

#include <iosfwd>
#include <string>

#include "qpm/grid.hpp"

namespace qpm {

// Textual grid block: one line "d side q", then side^d whitespace-separated
// symbols row-major. Lines starting with '#' are ignored; a trailing
// "# provenance <json>" line carries generator metadata.
void write_grid_text(std::ostream& os, const GridString& g);
GridString read_grid_text(std::istream& is);

struct GridFile {
    GridString grid;
    std::string provenance;  // raw JSON text, empty when absent
};

// Versioned binary layout: magic "QPMGRID\n", then u32 version, u32 dims,
// u64 side, u64 q, u8 symbol width, packed little-endian cells, u32
// provenance length + bytes.
void save_grid(const std::string& path, const GridString& g,
               const std::string& provenance = "", bool binary = false);
GridFile load_grid(const std::string& path);  // auto-detects the format

}  // namespace qpm
