#pragma once

#include <stdexcept>
#include <string>

namespace ctap {

// Base class for all library errors; catching ctap::Error at the CLI
// boundary maps every domain failure to a validation exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An edge joins two V1 vertices, or a self-loop sits on a V1 vertex.
class SemiBipartiteViolation : public Error {
public:
    using Error::Error;
};

// The same unordered vertex pair appears twice in an edge list.
class DuplicateEdge : public Error {
public:
    using Error::Error;
};

// A vertex id is outside the graph.
class NoSuchVertex : public Error {
public:
    using Error::Error;
};

// A party vertex is not a member of V1 (or is repeated).
class PartyPlacement : public Error {
public:
    using Error::Error;
};

// A numeric or structural parameter violates an operation's precondition.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A matrix expected to be hermitian is not.
class NotHermitian : public Error {
public:
    using Error::Error;
};

// The zero eigenspace does not have dimension one; carries the measured
// dimension so callers can report it.
class DegenerateKernel : public Error {
public:
    DegenerateKernel(int dim, const std::string& what) : Error(what), dim_(dim) {}
    int dim() const { return dim_; }

private:
    int dim_;
};

// Sender and receiver coincide.
class SameEndpoints : public Error {
public:
    using Error::Error;
};

// The instantaneous dark state has no well-defined limit at this time.
class DarkStateUndefined : public Error {
public:
    using Error::Error;
};

// The propagator drifted from unitarity beyond the accepted defect.
class IntegrationUnstable : public Error {
public:
    using Error::Error;
};

// No protocol time below the search cap reached the error threshold.
class TStarNotFound : public Error {
public:
    using Error::Error;
};

// A party-dependent quantity is undefined for this vertex (e.g. zero
// kernel amplitude).
class PartyUnsupported : public Error {
public:
    using Error::Error;
};

// The graph admits no perfect matching where one is required.
class NoMatching : public Error {
public:
    using Error::Error;
};

// The graph text format could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace ctap
