#pragma once

#include <doctest.h>

#include <functional>

#include "qoslrd/error.hpp"
#include "qoslrd/synthgen.hpp"

namespace qoslrd::testing {

inline TimeSeries white_noise(std::size_t n, std::uint64_t seed, double offset = 0.0) {
    GenSpec spec;
    spec.kind = GenKind::WhiteNoise;
    spec.n = n;
    spec.seed = seed;
    spec.offset = offset;
    return generate(spec);
}

inline TimeSeries arfima(double d, std::size_t n, std::uint64_t seed, double offset = 0.0) {
    GenSpec spec;
    spec.kind = GenKind::Arfima;
    spec.n = n;
    spec.seed = seed;
    spec.d = d;
    spec.offset = offset;
    return generate(spec);
}

inline TimeSeries fgn(double hurst, std::size_t n, std::uint64_t seed) {
    GenSpec spec;
    spec.kind = GenKind::Fgn;
    spec.n = n;
    spec.seed = seed;
    spec.hurst = hurst;
    return generate(spec);
}

inline TimeSeries random_walk(std::size_t n, std::uint64_t seed, double offset = 0.0) {
    GenSpec spec;
    spec.kind = GenKind::RandomWalk;
    spec.n = n;
    spec.seed = seed;
    spec.offset = offset;
    return generate(spec);
}

inline TimeSeries ar1(double phi, std::size_t n, std::uint64_t seed) {
    GenSpec spec;
    spec.kind = GenKind::Arma;
    spec.n = n;
    spec.seed = seed;
    spec.phi = {phi};
    return generate(spec);
}

inline TimeSeries series_of(std::vector<double> v) { return TimeSeries(std::move(v)); }

// Runs `fn` and checks it throws qoslrd::Error with the given code.
inline void check_errc(const std::function<void()>& fn, Errc expected) {
    try {
        fn();
        FAIL("expected " << to_string(expected));
    } catch (const Error& e) {
        CHECK_MESSAGE(e.code() == expected, "got " << e.qualified_code());
    }
}

}  // namespace qoslrd::testing
