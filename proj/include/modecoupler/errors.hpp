// errors.hpp: exception hierarchy shared by all modecoupler modules

#pragma once

#include <stdexcept>
#include <string>

namespace modecoupler {

// Invalid physical input or a regime precondition that does not hold.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Requested a regular-regime formula at the singular balanced/collective point.
class SingularRegimeError : public DomainError {
public:
    using DomainError::DomainError;
};

// Singular regime needs the conserved |d> population, which was not given.
class MissingInitialCondition : public SingularRegimeError {
public:
    using SingularRegimeError::SingularRegimeError;
};

class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace modecoupler
