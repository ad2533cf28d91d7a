#pragma once

#include <stdexcept>
#include <string>

namespace tessera {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input text could not be parsed at all (bad syntax, wrong token count, ...).
struct ParseError : Error {
    using Error::Error;
};

// Input parsed but violates a documented constraint (dimensions, weights, ...).
struct ValidationError : Error {
    using Error::Error;
};

// Cell index outside the tessellation.
struct IndexError : Error {
    using Error::Error;
};

// Point outside the tessellation rectangle.
struct OutOfBounds : Error {
    using Error::Error;
};

// Start/goal pair that no solver accepts (equal cells, out of range).
struct InvalidQuery : Error {
    using Error::Error;
};

// Two cells handed to edge_weight that are not 8-neighbors.
struct NotAdjacent : Error {
    using Error::Error;
};

// Vertex list that is not a connected 8-neighbor walk.
struct NotAPath : Error {
    using Error::Error;
};

// Level-set threshold outside [0, 1/2].
struct BadThreshold : Error {
    using Error::Error;
};

// Component decomposition could not certify a diagonal transition.
struct BridgeNotFound : Error {
    using Error::Error;
};

// A component of the level set failed to connect two of its own cells with
// axis moves; impossible by construction, so this is an internal assertion.
struct NoHVPath : Error {
    using Error::Error;
};

// Refinement level that would exceed the node budget (or the hard cap of 7).
struct LevelTooLarge : Error {
    using Error::Error;
};

}  // namespace tessera
