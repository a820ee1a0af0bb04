#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace skewsim {

/// A key/value pair as read from the input relation.
struct TupleRecord {
    std::uint64_t key = 0;
    std::uint64_t value = 0;

    friend bool operator==(const TupleRecord&, const TupleRecord&) = default;
    friend auto operator<=>(const TupleRecord&, const TupleRecord&) = default;
};

/// What a PrePE hands to the router: the buffered-data index and the value
/// that is combined into it. Interpretation is up to the application.
struct Payload {
    std::uint64_t index = 0;
    std::uint64_t value = 0;

    friend bool operator==(const Payload&, const Payload&) = default;
};

/// Output of an application's prepare hook.
struct Prepared {
    std::uint32_t dst = 0;  // primary PE in [0, M)
    Payload payload;
};

/// A prepared tuple in flight through the routing network.
/// `primary` is the PrePE's choice in [0, M); `dst` is the PE that finally
/// receives it, in [0, M + X) once the mapper has run.
struct RoutedTuple {
    Payload payload;
    std::uint32_t primary = 0;
    std::uint32_t dst = 0;
};

/// Element carried by a PE input channel: a routed tuple or the
/// end-of-stream marker that follows the last tuple.
struct Token {
    RoutedTuple tuple;
    bool end_of_stream = false;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the simulator detects a broken internal invariant
/// (conservation, channel overflow). Indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace skewsim
