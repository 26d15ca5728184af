#include "ppsim/cases.hpp"

#include <array>

namespace ppsim {

namespace {

constexpr std::array<CaseSetup, 16> kCases = {{
    {OpKind::Multiplication, 0.9, 0.9},
    {OpKind::Multiplication, 0.8, 0.9},
    {OpKind::Multiplication, 0.7, 0.8},
    {OpKind::Multiplication, 0.5, 0.8},
    {OpKind::Multiplication, 0.4, 0.5},
    {OpKind::Multiplication, 0.2, 0.9},
    {OpKind::Multiplication, 0.9, 0.2},
    {OpKind::Multiplication, 0.8, 0.5},
    {OpKind::Addition, 0.9, 0.9},
    {OpKind::Addition, 0.8, 0.9},
    {OpKind::Addition, 0.7, 0.8},
    {OpKind::Addition, 0.5, 0.8},
    {OpKind::Addition, 0.4, 0.5},
    {OpKind::Addition, 0.2, 0.9},
    {OpKind::Addition, 0.9, 0.2},
    {OpKind::Addition, 0.8, 0.5},
}};

}  // namespace

std::span<const CaseSetup> verification_cases() { return kCases; }

double case_target(const CaseSetup& setup) {
  if (setup.op == OpKind::Multiplication) {
    return setup.p_f * setup.p_b;
  }
  return 0.5 * (setup.p_f + setup.p_b);
}

}  // namespace ppsim
