#pragma once

#include <stdexcept>
#include <string>

namespace hkm {

// Malformed input text (TSV, FASTA, substitution matrix).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed input that violates a documented precondition or invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mathematical domain violation, e.g. correlation of a constant vector.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace hkm
