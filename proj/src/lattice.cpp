#include "sqd/lattice.hpp"

#include <algorithm>
#include <charconv>

namespace sqd {

int Lattice::site_index(int row, int col) const {
    if (row < 0 || row >= height || col < 0 || col >= width)
        throw LatticeError("site coordinate out of range");
    return row * width + (row % 2 == 0 ? col : width - 1 - col);
}

std::string Lattice::label() const {
    std::string s;
    if (kind == LatticeKind::Chain)
        s = "chain:" + std::to_string(width);
    else
        s = "rect:" + std::to_string(height) + "x" + std::to_string(width);
    if (periodic) s += ":periodic";
    return s;
}

namespace {

void add_bond(std::vector<std::pair<int, int>>& bonds, int a, int b) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    bonds.emplace_back(a, b);
}

void finalize_bonds(std::vector<std::pair<int, int>>& bonds) {
    std::sort(bonds.begin(), bonds.end());
    bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
}

}  // namespace

Lattice build_chain(int n_sites, bool periodic) {
    if (n_sites < 1) throw LatticeError("chain needs at least 1 site");
    Lattice lat;
    lat.kind = LatticeKind::Chain;
    lat.height = 1;
    lat.width = n_sites;
    lat.periodic = periodic;
    for (int i = 0; i + 1 < n_sites; ++i) add_bond(lat.bonds, i, i + 1);
    if (periodic && n_sites > 2) add_bond(lat.bonds, 0, n_sites - 1);
    finalize_bonds(lat.bonds);
    return lat;
}

Lattice build_rect(int height, int width, bool periodic) {
    if (height < 1 || width < 1 || height * width < 2)
        throw LatticeError("rectangle needs at least 2 sites");
    Lattice lat;
    lat.kind = LatticeKind::Rect;
    lat.height = height;
    lat.width = width;
    lat.periodic = periodic;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            int s = lat.site_index(r, c);
            if (c + 1 < width) add_bond(lat.bonds, s, lat.site_index(r, c + 1));
            if (r + 1 < height) add_bond(lat.bonds, s, lat.site_index(r + 1, c));
            if (periodic) {
                // wrap bonds only where they are not already nearest neighbors
                if (width > 2) add_bond(lat.bonds, s, lat.site_index(r, (c + 1) % width));
                if (height > 2) add_bond(lat.bonds, s, lat.site_index((r + 1) % height, c));
            }
        }
    }
    finalize_bonds(lat.bonds);
    return lat;
}

namespace {

int parse_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw LatticeError("bad integer in lattice spec: '" + s + "'");
    return v;
}

}  // namespace

Lattice parse_lattice(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        auto next = spec.find(':', pos);
        if (next == std::string::npos) next = spec.size();
        parts.push_back(spec.substr(pos, next - pos));
        pos = next + 1;
    }
    bool periodic = false;
    if (!parts.empty() && parts.back() == "periodic") {
        periodic = true;
        parts.pop_back();
    }
    if (parts.size() != 2) throw LatticeError("bad lattice spec: '" + spec + "'");
    if (parts[0] == "chain") return build_chain(parse_int(parts[1]), periodic);
    if (parts[0] == "rect") {
        auto x = parts[1].find('x');
        if (x == std::string::npos) throw LatticeError("bad rect spec: '" + spec + "'");
        return build_rect(parse_int(parts[1].substr(0, x)), parse_int(parts[1].substr(x + 1)),
                          periodic);
    }
    throw LatticeError("unknown lattice kind: '" + parts[0] + "'");
}

}  // namespace sqd
