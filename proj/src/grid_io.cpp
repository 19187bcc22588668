#include "qpm/grid_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qpm {

namespace {

constexpr char kMagic[8] = {'Q', 'P', 'M', 'G', 'R', 'I', 'D', '\n'};

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
    os.write(b, 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
    os.write(b, 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

std::string next_data_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        return line;
    }
    throw std::runtime_error("grid file: unexpected end of input");
}

}  // namespace

void write_grid_text(std::ostream& os, const GridString& g) {
    os << g.dims() << ' ' << g.side() << ' ' << g.alphabet() << '\n';
    const std::int64_t n = g.cell_count();
    for (std::int64_t i = 0; i < n; ++i) {
        os << g.at_flat(i);
        os << (((i + 1) % 32 == 0 || i + 1 == n) ? '\n' : ' ');
    }
}

GridString read_grid_text(std::istream& is) {
    std::istringstream header(next_data_line(is));
    int d = 0;
    std::int64_t side = 0;
    std::uint64_t q = 0;
    if (!(header >> d >> side >> q)) throw std::runtime_error("grid file: bad header line");
    GridString g(d, side, q);
    std::int64_t filled = 0;
    const std::int64_t total = g.cell_count();
    while (filled < total) {
        std::istringstream row(next_data_line(is));
        std::uint64_t sym;
        while (filled < total && row >> sym) g.set_flat(filled++, sym);
    }
    return g;
}

void save_grid(const std::string& path, const GridString& g,
               const std::string& provenance, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    if (binary) {
        os.write(kMagic, 8);
        put_u32(os, 1);
        put_u32(os, static_cast<std::uint32_t>(g.dims()));
        put_u64(os, static_cast<std::uint64_t>(g.side()));
        put_u64(os, g.alphabet());
        char w = static_cast<char>(g.symbol_width());
        os.write(&w, 1);
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            std::uint64_t v = g.at_flat(i);
            for (int b = 0; b < g.symbol_width(); ++b) {
                char byte = static_cast<char>(v >> (8 * b));
                os.write(&byte, 1);
            }
        }
        put_u32(os, static_cast<std::uint32_t>(provenance.size()));
        os.write(provenance.data(), static_cast<std::streamsize>(provenance.size()));
    } else {
        write_grid_text(os, g);
        if (!provenance.empty()) os << "# provenance " << provenance << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

GridFile load_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char head[8] = {};
    is.read(head, 8);
    GridFile out;
    if (is.gcount() == 8 && std::equal(head, head + 8, kMagic)) {
        std::uint32_t version = get_u32(is);
        if (version != 1) throw std::runtime_error("grid file: unsupported version");
        int d = static_cast<int>(get_u32(is));
        std::int64_t side = static_cast<std::int64_t>(get_u64(is));
        std::uint64_t q = get_u64(is);
        char w = 0;
        is.read(&w, 1);
        GridString g(d, side, q);
        if (w != g.symbol_width()) throw std::runtime_error("grid file: width mismatch");
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            std::uint64_t v = 0;
            for (int b = 0; b < g.symbol_width(); ++b) {
                unsigned char byte;
                is.read(reinterpret_cast<char*>(&byte), 1);
                v |= static_cast<std::uint64_t>(byte) << (8 * b);
            }
            g.set_flat(i, v);
        }
        std::uint32_t plen = get_u32(is);
        if (!is) throw std::runtime_error("grid file: truncated");
        out.provenance.resize(plen);
        is.read(out.provenance.data(), plen);
        out.grid = std::move(g);
    } else {
        is.clear();
        is.seekg(0);
        out.grid = read_grid_text(is);
        // scan remaining lines for provenance
        std::string line;
        while (std::getline(is, line)) {
            size_t at = line.find("# provenance ");
            if (at != std::string::npos) out.provenance = line.substr(at + 13);
        }
    }
    return out;
}

}  // namespace qpm
