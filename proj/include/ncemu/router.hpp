#ifndef NCEMU_ROUTER_HPP
#define NCEMU_ROUTER_HPP

#include <cstdint>
#include <string>
#include <variant>

#include "ncemu/core.hpp"

namespace ncemu {

/* A routed spike with relative destination offsets. dx east-positive,
 * dy north-positive; the route exhausts dx before dy (X-then-Y
 * dimension order). */
struct SpikePacket {
    int dx = 0;
    int dy = 0;
    int axon = 0;
    int delay = 1;
    std::uint64_t emit_tick = 0;
    int src_x = 0;
    int src_y = 0;
    int src_neuron = 0;
};

struct GridTopology {
    int width = 1;
    int height = 1;

    bool contains(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    int num_cores() const { return width * height; }
    int index(int x, int y) const { return y * width + x; }
};

enum class Edge { East, West, North, South };

inline const char* edge_name(Edge e) {
    switch (e) {
        case Edge::East: return "east";
        case Edge::West: return "west";
        case Edge::North: return "north";
        case Edge::South: return "south";
    }
    return "?";
}

struct Delivered {
    int x = 0;
    int y = 0;
};

/* Boundary exit: which edge the packet crossed and the offsets still
 * unconsumed after the crossing hop. */
struct Exited {
    Edge edge;
    int residual_dx = 0;
    int residual_dy = 0;
};

using RouteResult = std::variant<Delivered, Exited>;

/* Stateless dimension-ordered route. The network adds no ticks beyond
 * the packet's delay field; delivery tick is emit_tick + delay. */
inline RouteResult route(const GridTopology& grid, int origin_x, int origin_y,
                         const SpikePacket& pkt) {
    const int tx = origin_x + pkt.dx;
    if (tx >= grid.width) {
        return Exited{Edge::East, tx - grid.width, pkt.dy};
    }
    if (tx < 0) {
        return Exited{Edge::West, tx + 1, pkt.dy};
    }
    const int ty = origin_y + pkt.dy;
    if (ty >= grid.height) {
        return Exited{Edge::North, 0, ty - grid.height};
    }
    if (ty < 0) {
        return Exited{Edge::South, 0, ty + 1};
    }
    return Delivered{tx, ty};
}

} // namespace ncemu

#endif
