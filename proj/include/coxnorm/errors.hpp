#pragma once

#include <stdexcept>
#include <string>

namespace coxnorm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define COXNORM_ERROR_TYPE(NAME)                                            \
    struct NAME : Error {                                                   \
        explicit NAME(const std::string& msg) : Error(#NAME ": " + msg) {}  \
    }

COXNORM_ERROR_TYPE(OrderCapExceeded);
COXNORM_ERROR_TYPE(NumericalAmbiguity);
COXNORM_ERROR_TYPE(MixedGroups);
COXNORM_ERROR_TYPE(UnknownPreset);
COXNORM_ERROR_TYPE(SearchCapExceeded);
COXNORM_ERROR_TYPE(DepthCap);
COXNORM_ERROR_TYPE(WorkCapExceeded);
COXNORM_ERROR_TYPE(ResolutionCap);
COXNORM_ERROR_TYPE(GroupMismatch);
COXNORM_ERROR_TYPE(NotAReflection);
COXNORM_ERROR_TYPE(NotStableFamily);
COXNORM_ERROR_TYPE(ImaginaryResidue);
COXNORM_ERROR_TYPE(CertificateInvalid);
COXNORM_ERROR_TYPE(ParseError);

#undef COXNORM_ERROR_TYPE

}  // namespace coxnorm
