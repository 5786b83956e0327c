#pragma once

// Reference computations for the Taxi domain written without the library's
// domain code: its own wall table, its own dynamics and all-pairs distances.

#include <array>
#include <cstdlib>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

struct Pos {
    int x, y;
    bool operator==(const Pos&) const = default;
    bool operator<(const Pos& o) const { return x != o.x ? x < o.x : y < o.y; }
};

struct World {
    int w = 5, h = 5;
    std::set<std::pair<Pos, Pos>> walls;

    static World dietterich() {
        World world;
        // x0|x1 and x2|x3 along the bottom two rows, x1|x2 along the top two.
        for (int y : {0, 1}) world.add_wall({0, y}, {1, y});
        for (int y : {3, 4}) world.add_wall({1, y}, {2, y});
        for (int y : {0, 1}) world.add_wall({2, y}, {3, y});
        return world;
    }

    void add_wall(Pos a, Pos b) {
        walls.insert({a, b});
        walls.insert({b, a});
    }

    bool open(Pos a, Pos b) const {
        if (b.x < 0 || b.y < 0 || b.x >= w || b.y >= h) return false;
        return !walls.count({a, b});
    }

    // N, S, E, W as in the action order.
    Pos move(Pos p, int dir) const {
        static constexpr std::array<Pos, 4> d{{{0, 1}, {0, -1}, {1, 0}, {-1, 0}}};
        Pos q{p.x + d[dir].x, p.y + d[dir].y};
        return open(p, q) ? q : p;
    }

    // Floyd-Warshall over cells; -1 when unreachable.
    std::vector<std::vector<int>> distances() const {
        const int n = w * h;
        const int inf = 1 << 20;
        std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
        for (int i = 0; i < n; ++i) {
            d[i][i] = 0;
            Pos p{i / h, i % h};
            for (int dir = 0; dir < 4; ++dir) {
                Pos q = move(p, dir);
                if (!(q == p)) d[i][q.x * h + q.y] = 1;
            }
        }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        for (auto& row : d)
            for (int& x : row)
                if (x >= inf) x = -1;
        return d;
    }

    int distance(Pos a, Pos b) const { return distances()[a.x * h + a.y][b.x * h + b.y]; }
};

struct TaxiState {
    Pos taxi, pass;
    bool in = false;
    bool operator==(const TaxiState&) const = default;
};

// One primitive step: 0..3 moves, 4 pick-up, 5 put-down. `ok` is false when
// the action is not applicable.
inline TaxiState step(const World& world, TaxiState s, int action, bool& ok) {
    ok = true;
    if (action < 4) {
        s.taxi = world.move(s.taxi, action);
        if (s.in) s.pass = s.taxi;
        return s;
    }
    if (action == 4) {
        ok = !s.in && s.taxi == s.pass;
        if (ok) s.in = true;
        return s;
    }
    ok = s.in;
    if (ok) s.in = false;
    return s;
}

inline const std::array<std::pair<const char*, Pos>, 4> kDepots{{
    {"red", {0, 4}}, {"green", {4, 4}}, {"blue", {3, 0}}, {"yellow", {0, 0}}}};

inline bool is_depot(Pos p) {
    for (const auto& [name, cell] : kDepots)
        if (cell == p) return true;
    return false;
}

} // namespace oracle
