#pragma once

namespace resonance::kernels {

// Instruction-set variants of the arithmetic kernels. Every kernel has a
// scalar reference implementation; wider variants are selected at runtime
// and are tested for equivalence against the reference.
enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;

// What the CPU supports (AVX2 + FMA for the avx2 variant).
Isa detected_isa() noexcept;

// Variant used by the dispatching entry points. Defaults to detected_isa(),
// or to scalar when the environment variable RESONANCE_ISA=scalar is set.
Isa active_isa() noexcept;

// Overrides the active variant. Requests above detected_isa() are clamped.
void set_active_isa(Isa isa) noexcept;

// Restores the previous variant on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) noexcept : saved_(active_isa()) { set_active_isa(isa); }
  ~ScopedIsa() { set_active_isa(saved_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa saved_;
};

}  // namespace resonance::kernels
