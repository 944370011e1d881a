#include "fuzzpipe/sim/motion.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include "fuzzpipe/core/parallel.hpp"
#include "fuzzpipe/core/rng.hpp"

namespace fuzzpipe::sim {

using core::Vec3;

Vec3 boundary_displacement(const Vec3& x, const Vec3& c, double inner_radius, double outer_radius,
                           double steepness) {
    const Vec3 offset = x - c;
    const double dist = offset.norm();
    if (dist == 0.0) return {0.0, 0.0, 0.0};  // direction undefined
    const Vec3 unit = offset * (1.0 / dist);
    if (dist < inner_radius) {
        return unit * (1.0 - std::exp(steepness * (dist - inner_radius)));
    }
    if (dist > outer_radius) {
        return unit * -(1.0 - std::exp(-steepness * (dist - outer_radius)));
    }
    return {0.0, 0.0, 0.0};
}

PairDisplacement pair_displacement(double dist, double radius_i, double radius_j,
                                   const SimConfig& config) {
    PairDisplacement out;
    const double contact = radius_i + radius_j;
    const double reach = config.interaction_factor * contact;
    if (dist < contact) {
        const double t = 1.0 - dist / contact;
        out.repulsion = config.step_length * t * t;
    }
    if (dist < reach) {
        const double s = dist / reach;
        out.adhesion = -config.step_length * s * (1.0 - s) * (1.0 - s);
    }
    return out;
}

namespace {

struct NeighborGrid {
    double cell = 1.0;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> cells;

    static std::int64_t key(int cx, int cy, int cz) {
        return (static_cast<std::int64_t>(cx) & 0x1fffff) |
               ((static_cast<std::int64_t>(cy) & 0x1fffff) << 21) |
               ((static_cast<std::int64_t>(cz) & 0x1fffff) << 42);
    }

    void build(const std::vector<SimObject>& objects, double cell_size) {
        cell = cell_size;
        cells.clear();
        for (std::size_t i = 0; i < objects.size(); ++i) {
            const Vec3& p = objects[i].position;
            cells[key(static_cast<int>(std::floor(p.x / cell)),
                      static_cast<int>(std::floor(p.y / cell)),
                      static_cast<int>(std::floor(p.z / cell)))]
                .push_back(i);
        }
    }

    template <typename Fn>
    void for_neighbors(const Vec3& p, Fn&& fn) const {
        const int cx = static_cast<int>(std::floor(p.x / cell));
        const int cy = static_cast<int>(std::floor(p.y / cell));
        const int cz = static_cast<int>(std::floor(p.z / cell));
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const auto it = cells.find(key(cx + dx, cy + dy, cz + dz));
                    if (it == cells.end()) continue;
                    for (const std::size_t j : it->second) fn(j);
                }
    }
};

Vec3 displacement_with_grid(std::size_t i, const std::vector<SimObject>& objects,
                            const NeighborGrid& grid, const SimConfig& config) {
    const SimObject& obj = objects[i];
    Vec3 total = config.w_boundary * boundary_displacement(obj.position, config.center,
                                                           config.inner_radius,
                                                           config.outer_radius,
                                                           config.boundary_steepness);
    grid.for_neighbors(obj.position, [&](std::size_t j) {
        if (j == i) return;
        const Vec3 delta = obj.position - objects[j].position;
        const double dist = delta.norm();
        if (dist >= config.interaction_factor * (obj.radius + objects[j].radius)) return;
        const auto pd = pair_displacement(dist, obj.radius, objects[j].radius, config);
        const Vec3 dir = dist > 0.0 ? delta * (1.0 / dist) : Vec3{1.0, 0.0, 0.0};
        total += dir * (config.w_repulsion * pd.repulsion + config.w_adhesion * pd.adhesion);
    });
    return total;
}

Vec3 random_unit(core::Rng& rng) {
    for (;;) {
        const Vec3 v{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double n2 = v.squared_norm();
        if (n2 > 1e-6 && n2 <= 1.0) return v * (1.0 / std::sqrt(n2));
    }
}

Vec3 random_tangent(core::Rng& rng, const Vec3& radial) {
    const Vec3 u = radial.normalized();
    for (;;) {
        const Vec3 v = random_unit(rng);
        const double proj = v.x * u.x + v.y * u.y + v.z * u.z;
        const Vec3 t{v.x - proj * u.x, v.y - proj * u.y, v.z - proj * u.z};
        const double n = t.norm();
        if (n > 1e-6) return t * (1.0 / n);
    }
}

}  // namespace

Vec3 total_displacement(std::size_t i, const std::vector<SimObject>& objects,
                        const SimConfig& config) {
    if (i >= objects.size()) throw std::out_of_range("total_displacement: bad object index");
    double max_radius = 0.0;
    for (const auto& o : objects) max_radius = std::max(max_radius, o.radius);
    NeighborGrid grid;
    grid.build(objects, std::max(1.0, config.interaction_factor * 2.0 * max_radius));
    return displacement_with_grid(i, objects, grid, config);
}

SimResult simulate(const SimConfig& config) {
    core::Rng rng(config.seed);
    const double mid_radius = 0.5 * (config.inner_radius + config.outer_radius);

    std::vector<SimObject> current;
    int next_id = 1;
    auto spawn = [&](const Vec3& pos, int parent, int frame) {
        SimObject o;
        o.id = next_id++;
        o.position = pos;
        o.radius = config.object_radius * rng.uniform(0.9, 1.1);
        o.parent_id = parent;
        o.birth_frame = frame;
        o.next_division = frame + config.division_period * rng.uniform(0.8, 1.2);
        o.intensity_scale = 1.0 + config.intensity_jitter * rng.uniform(-1.0, 1.0);
        o.render_salt = core::mix_seed(config.seed, static_cast<std::uint64_t>(o.id));
        return o;
    };

    // Initial population inside a polar cap of the shell (animal pole up).
    const Vec3 pole{0.0, -1.0, 0.0};
    const Vec3 axis_u{1.0, 0.0, 0.0};
    const Vec3 axis_v{0.0, 0.0, 1.0};
    for (int i = 0; i < config.initial_count; ++i) {
        const double cos_theta = rng.uniform(std::cos(config.initial_cap_angle), 1.0);
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
        const double phi = rng.uniform(0.0, 6.28318530717958647692);
        const Vec3 dir = pole * cos_theta +
                         (axis_u * std::cos(phi) + axis_v * std::sin(phi)) * sin_theta;
        current.push_back(spawn(config.center + dir * mid_radius, 0, 0));
        // first division staggered so the population does not burst in sync
        current.back().next_division = config.division_period * rng.uniform(0.2, 1.5);
    }

    SimResult result;
    result.frames.reserve(config.frames);

    auto record_frame = [&](int frame, const std::vector<SimObject>& objs) {
        for (const auto& o : objs) {
            TruthRecord r;
            r.frame = frame;
            r.object_id = o.id;
            r.parent_id = o.birth_frame == frame ? o.parent_id : 0;
            r.predecessor_id = o.birth_frame == frame ? 0 : o.id;
            r.position = o.position;
            r.radius = o.radius;
            result.truth.push_back(r);
        }
    };

    record_frame(0, current);
    result.frames.push_back(current);

    NeighborGrid grid;
    for (int frame = 1; frame < config.frames; ++frame) {
        // explicit Euler step over the previous positions (double-buffered)
        double max_radius = 0.0;
        for (const auto& o : current) max_radius = std::max(max_radius, o.radius);
        grid.build(current, std::max(1.0, config.interaction_factor * 2.0 * max_radius));
        std::vector<Vec3> moved(current.size());
        core::parallel_chunks(current.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                moved[i] = current[i].position + displacement_with_grid(i, current, grid, config);
        });
        for (std::size_t i = 0; i < current.size(); ++i) current[i].position = moved[i];

        // divisions, bounded by the population target
        std::vector<SimObject> next;
        next.reserve(current.size() + 8);
        int population = static_cast<int>(current.size());
        for (auto& o : current) {
            if (static_cast<double>(frame) >= o.next_division && population < config.target_count) {
                const Vec3 tangent = random_tangent(rng, o.position - config.center);
                next.push_back(spawn(o.position + tangent * (0.5 * o.radius), o.id, frame));
                next.push_back(spawn(o.position - tangent * (0.5 * o.radius), o.id, frame));
                ++population;
            } else {
                next.push_back(o);
            }
        }
        current = std::move(next);

        record_frame(frame, current);
        result.frames.push_back(current);
    }
    return result;
}

}  // namespace fuzzpipe::sim
