#ifndef FROBCURVES_ERRORS_HPP
#define FROBCURVES_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace frobcurves {

// Every failure carries a stable machine-readable code. "user" errors are
// rejected inputs or refused hypotheses (CLI exit code 2); "internal" errors
// are broken invariants inside the library itself (CLI exit code 1).
enum class ErrClass { user, internal };

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg, ErrClass cls = ErrClass::user)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)), cls_(cls) {}

    const std::string& code() const noexcept { return code_; }
    ErrClass err_class() const noexcept { return cls_; }

private:
    std::string code_;
    ErrClass cls_;
};

// Refused classification: the input sits outside the hypotheses a theorem
// engine requires. Violations list the named hypothesis codes.
class AssumptionViolated : public Error {
public:
    explicit AssumptionViolated(std::vector<std::string> violations)
        : Error("AssumptionViolated", join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& x : v) {
            if (!s.empty()) s += "; ";
            s += x;
        }
        return s;
    }
    std::vector<std::string> violations_;
};

inline void internal_check(bool cond, const std::string& what) {
    if (!cond) throw Error("InternalAssertion", what, ErrClass::internal);
}

} // namespace frobcurves

#endif
