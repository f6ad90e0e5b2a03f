#ifndef FRAN_ERRORS_HPP
#define FRAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fran {

/// Invalid or inconsistent configuration (bad key, violated invariant, unknown identifier).
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

/// The requested allocation cannot exist (e.g. more F-UEs in a cell than subchannels).
class InfeasibleError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace fran

#endif // FRAN_ERRORS_HPP
