#pragma once

// Random-model census: one record per seed, computed in parallel and
// reported in seed order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dimer/generate.hpp"
#include "dimer/matchings.hpp"
#include "dimer/zigzag.hpp"

namespace dimer {

struct ModelParams {
    Family family = Family::hexagonal;
    int rows = 3;
    int cols = 3;
    double p = 0.1;
    std::uint64_t seed = 0;
};

/// Default parameters for a seed: families alternate with the seed's parity,
/// deletion probability alternates 0.1 / 0.2 with the next bit.
inline ModelParams standard_params(std::uint64_t seed) {
    ModelParams mp;
    mp.family = seed % 2 ? Family::square : Family::hexagonal;
    mp.p = (seed / 2) % 2 ? 0.2 : 0.1;
    mp.seed = seed;
    return mp;
}

inline RandomModel generate(const ModelParams& mp) { return random_model(mp.family, mp.rows, mp.cols, mp.p, mp.seed); }

struct CensusRecord {
    ModelParams params;
    std::size_t rejections = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    bool consistent = false;
    bool polygons_equal = false;
    std::int64_t char_area2 = 0;
    std::int64_t zigzag_area2 = 0;
};

inline CensusRecord census_record(const ModelParams& mp) {
    auto model = generate(mp);
    auto g = validated(std::move(model.graph));
    CensusRecord r;
    r.params = mp;
    r.rejections = model.rejections;
    r.nodes = g.node_count();
    r.edges = g.edge_count();
    r.consistent = is_consistent(g).consistent;
    auto cp = characteristic_polygon(g);
    auto zp = zigzag_polygon(g);
    r.polygons_equal = cp == zp;
    r.char_area2 = cp.area2();
    r.zigzag_area2 = zp.area2();
    return r;
}

/// Records for params[i], computed on up to `threads` workers (0 = hardware).
inline std::vector<CensusRecord> run_census(const std::vector<ModelParams>& params, unsigned threads = 0) {
    std::vector<CensusRecord> out(params.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, params.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::optional<std::exception_ptr>> errors(params.size());
    auto work = [&] {
        for (std::size_t i = next++; i < params.size(); i = next++) {
            try {
                out[i] = census_record(params[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(*e);
    }
    return out;
}

inline std::string census_csv(const std::vector<CensusRecord>& records) {
    std::ostringstream os;
    os << "seed,family,rows,cols,p,nodes,edges,consistent,polygons_equal,char_area2,zigzag_area2\n";
    for (const auto& r : records) {
        os << r.params.seed << ',' << to_string(r.params.family) << ',' << r.params.rows << ',' << r.params.cols << ','
           << r.params.p << ',' << r.nodes << ',' << r.edges << ',' << (r.consistent ? "true" : "false") << ','
           << (r.polygons_equal ? "true" : "false") << ',' << r.char_area2 << ',' << r.zigzag_area2 << '\n';
    }
    return os.str();
}

}  // namespace dimer
