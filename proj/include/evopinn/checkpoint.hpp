#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "evopinn/field_net.hpp"

namespace evopinn {

/// Checkpoint file: a plain-text header terminated by "end-header", followed
/// by all parameters as little-endian 64-bit floats in declaration order
/// (W_1 row-major, b_1, ..., output matrix), one block per time segment.
struct CheckpointMeta {
    std::vector<int> dims;
    std::string embedding = "identity";  // "identity" | "fourier <x_min> <period> <modes>"
    std::string constraint = "none";     // none|periodic-fourier|dirichlet-ball|dirichlet-box
    bool pin_initial = false;
    std::string basis_family = "lagrange-p1";
    int elements = 1;
    double t_begin = 0.0, t_end = 1.0;
    int segments = 1;
    std::uint64_t seed = 0;
};

namespace detail {
inline void require_little_endian() {
    const std::uint16_t probe = 1;
    if (*reinterpret_cast<const std::uint8_t*>(&probe) != 1)
        throw std::runtime_error("checkpoint io requires a little-endian host");
}
}  // namespace detail

inline void save_checkpoint(const std::string& path, const CheckpointMeta& meta,
                            const std::vector<const MlpParams*>& segment_params) {
    detail::require_little_endian();
    if (static_cast<int>(segment_params.size()) != meta.segments)
        throw std::invalid_argument("save_checkpoint: segment count mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
    out << "evopinn-checkpoint v1\n";
    out << "dims";
    for (int m : meta.dims) out << ' ' << m;
    out << '\n';
    out << "embedding " << meta.embedding << '\n';
    out << "constraint " << meta.constraint << '\n';
    out << "pin_initial " << (meta.pin_initial ? 1 : 0) << '\n';
    out << "basis " << meta.basis_family << ' ' << meta.elements << ' ';
    out.precision(17);
    out << meta.t_begin << ' ' << meta.t_end << '\n';
    out << "segments " << meta.segments << '\n';
    out << "seed " << meta.seed << '\n';
    out << "end-header\n";
    std::vector<double> flat;
    for (const MlpParams* p : segment_params) {
        p->to_flat(flat);
        out.write(reinterpret_cast<const char*>(flat.data()),
                  static_cast<std::streamsize>(flat.size() * sizeof(double)));
    }
    if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

inline std::pair<CheckpointMeta, std::vector<MlpParams>> load_checkpoint(
    const std::string& path) {
    detail::require_little_endian();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line != "evopinn-checkpoint v1")
        throw std::runtime_error("load_checkpoint: bad magic in " + path);
    CheckpointMeta meta;
    while (std::getline(in, line) && line != "end-header") {
        std::istringstream row(line);
        std::string key;
        row >> key;
        if (key == "dims") {
            int v;
            meta.dims.clear();
            while (row >> v) meta.dims.push_back(v);
        } else if (key == "embedding") {
            std::getline(row, meta.embedding);
            meta.embedding.erase(0, meta.embedding.find_first_not_of(' '));
        } else if (key == "constraint") {
            row >> meta.constraint;
        } else if (key == "pin_initial") {
            int v;
            row >> v;
            meta.pin_initial = v != 0;
        } else if (key == "basis") {
            row >> meta.basis_family >> meta.elements >> meta.t_begin >> meta.t_end;
        } else if (key == "segments") {
            row >> meta.segments;
        } else if (key == "seed") {
            row >> meta.seed;
        } else {
            throw std::runtime_error("load_checkpoint: unknown header key '" + key + "'");
        }
    }
    if (line != "end-header")
        throw std::runtime_error("load_checkpoint: missing end-header in " + path);
    if (meta.dims.size() < 2) throw std::runtime_error("load_checkpoint: missing dims");

    std::vector<MlpParams> segments;
    const long scalars = MlpParams::zeros(meta.dims).num_scalars();
    std::vector<double> flat(static_cast<std::size_t>(scalars));
    for (int s = 0; s < meta.segments; ++s) {
        in.read(reinterpret_cast<char*>(flat.data()),
                static_cast<std::streamsize>(flat.size() * sizeof(double)));
        if (!in)
            throw std::runtime_error("load_checkpoint: truncated parameter block in " + path);
        MlpParams p = MlpParams::zeros(meta.dims);
        p.from_flat(flat.data(), flat.size());
        segments.push_back(std::move(p));
    }
    return {meta, std::move(segments)};
}

}  // namespace evopinn
