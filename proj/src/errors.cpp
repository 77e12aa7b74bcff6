#include "luq/errors.hpp"

#include <cstdio>

namespace luq {

namespace {
std::string fmt_point(double x, double y, double t) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(x=%.17g, y=%.17g, t=%.17g)", x, y, t);
    return buf;
}
} // namespace

DomainError::DomainError(double x, double y, double t)
    : Error("query outside velocity data domain at " + fmt_point(x, y, t)), x_(x), y_(y), t_(t) {}

PoleError::PoleError(double latitude_deg)
    : Error("spherical kinematics singular at latitude " + std::to_string(latitude_deg) + " deg") {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

ValueError::ValueError(std::size_t it, std::size_t iy, std::size_t ix, const std::string& what)
    : Error(what + " at (it=" + std::to_string(it) + ", iy=" + std::to_string(iy) + ", ix=" + std::to_string(ix) +
            ")"),
      it_(it), iy_(iy), ix_(ix) {}

} // namespace luq
