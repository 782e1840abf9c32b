#ifndef DYNHEAT_ERRORS_HPP_
#define DYNHEAT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dynheat {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateSignal : Error {
    explicit DegenerateSignal(const std::string& msg) : Error(msg) {}
};

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& msg) : Error(msg) {}
};

struct ZeroVariance : Error {
    explicit ZeroVariance(const std::string& msg) : Error(msg) {}
};

struct AsymmetricInput : Error {
    explicit AsymmetricInput(const std::string& msg) : Error(msg) {}
};

struct LabelOutOfRange : Error {
    explicit LabelOutOfRange(const std::string& msg) : Error(msg) {}
};

struct EmptyInput : Error {
    explicit EmptyInput(const std::string& msg) : Error(msg) {}
};

struct EmptyState : Error {
    explicit EmptyState(const std::string& msg) : Error(msg) {}
};

struct StateNotVisited : Error {
    explicit StateNotVisited(const std::string& msg) : Error(msg) {}
};

struct InsufficientPairs : Error {
    explicit InsufficientPairs(const std::string& msg) : Error(msg) {}
};

struct NotPSD : Error {
    explicit NotPSD(const std::string& msg) : Error(msg) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct IncompleteRun : Error {
    explicit IncompleteRun(const std::string& msg) : Error(msg) {}
};

}  // namespace dynheat

#endif  // DYNHEAT_ERRORS_HPP_
