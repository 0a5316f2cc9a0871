#pragma once

#include <string>
#include <vector>

#include "dimer/census.hpp"
#include "dimer/io.hpp"

namespace testing_support {

inline std::string fixture_path(const std::string& name) { return std::string(DIMER_FIXTURES) + "/" + name + ".json"; }

inline dimer::TorusGraph fixture(const std::string& name) { return dimer::load_graph(fixture_path(name)); }

inline dimer::RawGraph raw_fixture(const std::string& name) { return dimer::load_raw_graph(fixture_path(name)); }

inline dimer::TorusGraph random_graph(std::uint64_t seed) {
    return dimer::validated(dimer::generate(dimer::standard_params(seed)).graph);
}

}  // namespace testing_support
